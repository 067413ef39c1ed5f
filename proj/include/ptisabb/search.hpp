#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ptisabb/inference.hpp"
#include "ptisabb/metrics.hpp"
#include "ptisabb/model.hpp"
#include "ptisabb/pseudo_tree.hpp"
#include "ptisabb/simulator.hpp"

namespace ptisabb {

enum class SearchVariant {
  /// UTIL phase with parent-side elimination, then search.
  kNonLocal,
  /// UTIL phase with child-side elimination, then search.
  kLocal,
  /// Search alone with all subtree bounds at zero (tree-based SABB).
  kNoInference,
};

/// Values the parent computed when it sent a CPA for `value` to `child`.
/// child_ub + high_cost + other_children_lb == agent_ub whenever agent_ub is
/// finite.
struct CpaSendTrace {
  AgentId agent = 0;
  AgentId child = 0;
  Value value = 0;
  Cost agent_ub = 0;
  Cost high_cost = 0;
  Cost other_children_lb = 0;
  Cost child_ub = 0;
};

struct SolveOptions {
  std::size_t dimension_limit = kNoDimensionLimit;
  SearchVariant variant = SearchVariant::kNonLocal;
  SchedulePolicy policy;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::function<void(const Message&)> observer;
  std::function<void(const CpaSendTrace&)> on_cpa_sent;
};

struct SolveResult {
  Cost cost = 0;
  Assignment assignment;
  Metrics metrics;
};

/// Smallest value d >= from with lower_bounds[d] < ub. Adds one op per
/// comparison.
std::optional<Value> first_feasible(std::span<const Cost> lower_bounds, Cost ub, Value from,
                                    OpCount* ops = nullptr);

/// Branch-and-bound agent on the pseudo tree. It first takes part in the UTIL
/// phase (unless the variant skips it), then explores values with
/// CPA / COST_REQ / COST / BACKTRACK and stops on TERMINATE.
class PtIsabbAgent : public InferenceAgent {
 public:
  PtIsabbAgent(AgentId id, const InferenceRules& rules, SearchVariant variant,
               const SolveOptions* options = nullptr);

  void start(AgentContext& ctx) override;
  bool terminated() const override { return terminated_; }

  /// Root only, after termination.
  Cost best_cost() const { return best_cost_; }
  const Assignment& best_assignment() const { return best_assignment_; }

 protected:
  void on_inference_complete(AgentContext& ctx) override;
  void on_search_message(const Message& msg, AgentContext& ctx) override;

 private:
  std::size_t domain() const { return high_cost_.size(); }
  bool is_root() const;
  bool is_leaf() const { return children_.empty(); }
  Cost lb(Value d) const;
  bool costs_known(Value d) const;
  std::optional<Value> next_feasible(Value from, AgentContext& ctx) const;

  void begin_search(AgentContext& ctx);
  void reset_for_cpa(AgentContext& ctx);
  void handle_cpa(const Message& msg, AgentContext& ctx);
  void handle_cost_req(const Message& msg, AgentContext& ctx);
  void handle_cost(const Message& msg, AgentContext& ctx);
  void handle_backtrack(const Message& msg, AgentContext& ctx);
  void handle_terminate(AgentContext& ctx);

  void request_costs(Value d, AgentContext& ctx);
  void on_costs_complete(Value d, AgentContext& ctx);
  void leaf_explore(std::optional<Value> d, AgentContext& ctx);
  void advance_child(std::size_t c, Value from, AgentContext& ctx);
  void send_cpa(std::size_t c, Value d, AgentContext& ctx);
  void check_exhausted(AgentContext& ctx);
  std::optional<Value> best_complete_value() const;
  void finish_root(AgentContext& ctx);
  void backtrack_to_parent(AgentContext& ctx);
  std::size_t child_slot(AgentId child) const;

  SearchVariant variant_;
  const SolveOptions* options_;
  std::vector<AgentId> parents_;
  std::vector<AgentId> children_;

  // per Cpa
  Assignment cpa_;
  Cost ub_ = kInfinity;
  Cost received_ub_ = kInfinity;
  std::uint64_t generation_ = 0;
  bool active_ = false;
  std::vector<Cost> high_cost_;
  std::vector<std::size_t> costs_received_;
  std::vector<char> costs_requested_;
  std::vector<std::vector<Cost>> lb_child_;
  std::vector<std::vector<char>> reported_;
  std::vector<char> complete_;
  std::vector<Assignment> spa_;
  // per child: value under exploration (-1 once the child exhausted the domain)
  std::vector<Value> srch_val_;
  std::vector<char> cpa_outstanding_;
  std::vector<std::uint64_t> child_generation_;

  bool terminated_ = false;
  Cost best_cost_ = kInfinity;
  Assignment best_assignment_;
};

/// Runs the full two-phase solver and returns the optimum found by the root.
SolveResult solve_pt_isabb(const Instance& instance, const PseudoTree& tree,
                           const SolveOptions& options = {});

}  // namespace ptisabb
