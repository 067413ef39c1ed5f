#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>

#include "ptisabb/model.hpp"
#include "ptisabb/utility_table.hpp"

namespace ptisabb {

enum class MessageKind : std::uint8_t {
  kUtil,
  kCpa,
  kCostReq,
  kCost,
  kBacktrack,
  kTerminate,
  // incumbent broadcast of the chain-ordered baseline
  kSolution,
};
inline constexpr std::size_t kMessageKindCount = 7;

std::string_view to_string(MessageKind kind);

/// One protocol unit. Fields not used by a kind keep their defaults.
///
///   UTIL       table
///   CPA        assignment (partial assignment), bound (upper bound),
///              cost (accumulated cost, chain baseline only), generation
///   COST_REQ   value (requester's value), generation
///   COST       value (echoed), cost (responder's private cost), generation
///   BACKTRACK  value (explored parent value), cost (best cost or infinity),
///              assignment (best subtree assignment), feasible, generation;
///              the chain baseline reports its bound instead
///   TERMINATE  -
///   SOLUTION   assignment (complete), cost
struct Message {
  MessageKind kind = MessageKind::kTerminate;
  AgentId sender = 0;
  AgentId receiver = 0;
  /// Sender's NCLO clock at send time; filled in by the simulator.
  OpCount stamp = 0;

  std::uint64_t generation = 0;
  Value value = Assignment::kUnassigned;
  Cost cost = 0;
  Cost bound = kInfinity;
  bool feasible = false;
  Assignment assignment;
  std::shared_ptr<const UtilityTable> table;

  /// Size in scalar units: UTIL ships its entries, CPA and SOLUTION one slot
  /// per agent plus the bound, BACKTRACK three scalars plus the reported
  /// assignment, the rest a couple of scalars.
  std::size_t size() const;
};

}  // namespace ptisabb
