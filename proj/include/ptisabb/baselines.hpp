#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ptisabb/metrics.hpp"
#include "ptisabb/model.hpp"
#include "ptisabb/search.hpp"
#include "ptisabb/simulator.hpp"

namespace ptisabb {

class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultBruteForceCap = 10'000'000;

struct BruteForceResult {
  Cost cost = 0;
  Assignment assignment;
};

/// Exact optimum by enumerating every complete assignment. The first optimal
/// assignment in lexicographic order (agent 0 most significant) is returned.
BruteForceResult brute_force_solve(const Instance& instance,
                                   std::uint64_t cap = kDefaultBruteForceCap);

/// Total order of agents for the chain baseline.
using ChainOrder = std::vector<AgentId>;

struct SabbOptions {
  SchedulePolicy policy;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::function<void(const Message&)> observer;
};

/// Synchronous branch and bound along a total order. Each agent adds its own
/// side toward earlier neighbours, asks those neighbours for their sides with
/// COST_REQ/COST, prunes against the incumbent and passes the CPA on. The last
/// agent broadcasts every new incumbent to all other agents.
SolveResult solve_sabb(const Instance& instance, const ChainOrder& order,
                       const SabbOptions& options = {});

}  // namespace ptisabb
