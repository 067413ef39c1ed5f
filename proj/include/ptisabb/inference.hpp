#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ptisabb/metrics.hpp"
#include "ptisabb/model.hpp"
#include "ptisabb/pseudo_tree.hpp"
#include "ptisabb/simulator.hpp"
#include "ptisabb/utility_table.hpp"

namespace ptisabb {

/// Where a child's variable is eliminated.
enum class Elimination {
  /// The child ships its joined table; the parent adds its own private side
  /// before minimising the child's variable out.
  kNonLocal,
  /// The child minimises its own variable out before shipping.
  kLocal,
};

/// Table arithmetic of the bottom-up phase for one (instance, tree, limit).
class InferenceRules {
 public:
  InferenceRules(const Instance& instance, const PseudoTree& tree, std::size_t dimension_limit,
                 Elimination elimination);

  const Instance& instance() const { return *instance_; }
  const PseudoTree& tree() const { return *tree_; }
  const DimensionOrder& order() const { return order_; }
  std::size_t dimension_limit() const { return limit_; }
  Elimination elimination() const { return elimination_; }

  /// Join of the agent's own sides toward its parent and pseudo parents.
  UtilityTable local_util(AgentId agent, OpCount* ops = nullptr) const;

  /// The UTIL table `sender` ships to its parent, given its Child_util tables.
  UtilityTable outgoing(AgentId sender, const std::map<AgentId, UtilityTable>& child_util,
                        OpCount* ops = nullptr) const;

  /// Child_util_receiver^child computed from the received UTIL table.
  UtilityTable absorb(AgentId receiver, AgentId child, const UtilityTable& received,
                      OpCount* ops = nullptr) const;

 private:
  const Instance* instance_;
  const PseudoTree* tree_;
  DimensionOrder order_;
  std::size_t limit_;
  Elimination elimination_;
};

/// Agent running the bottom-up UTIL phase: leaves ship on start, inner agents
/// ship once every child has reported, the root consumes and stops.
class InferenceAgent : public Agent {
 public:
  InferenceAgent(AgentId id, const InferenceRules& rules);

  void start(AgentContext& ctx) override;
  void receive(const Message& msg, AgentContext& ctx) override;
  bool terminated() const override { return inference_done_; }

  const std::map<AgentId, UtilityTable>& child_util() const { return child_util_; }
  const std::optional<UtilityTable>& shipped() const { return shipped_; }

 protected:
  const InferenceRules& rules() const { return *rules_; }
  bool inference_done() const { return inference_done_; }
  /// Runs once every child's table has been absorbed (and, off the root, the
  /// agent's own table shipped).
  virtual void on_inference_complete(AgentContext& ctx) { (void)ctx; }
  virtual void on_search_message(const Message& msg, AgentContext& ctx);

 private:
  void maybe_finish(AgentContext& ctx);

  const InferenceRules* rules_;
  std::map<AgentId, UtilityTable> child_util_;
  std::optional<UtilityTable> shipped_;
  bool inference_done_ = false;
};

struct InferenceResult {
  /// Per agent: child id -> Child_util table.
  std::vector<std::map<AgentId, UtilityTable>> child_util;
  /// Per agent: the table it shipped (empty for the root).
  std::vector<std::optional<UtilityTable>> shipped;
  std::size_t util_msg_count = 0;
  std::uint64_t util_msg_entries = 0;
  std::vector<OpCount> clocks;
  Metrics metrics;
};

/// Bottom-up UTIL propagation with elimination deferred to the parent.
InferenceResult run_inference(const Instance& instance, const PseudoTree& tree,
                              std::size_t dimension_limit, RevealLedger* ledger = nullptr);

/// Same phase with each child eliminating its own variable before shipping.
InferenceResult run_inference_local(const Instance& instance, const PseudoTree& tree,
                                    std::size_t dimension_limit, RevealLedger* ledger = nullptr);

InferenceResult run_inference(const Instance& instance, const PseudoTree& tree,
                              std::size_t dimension_limit, Elimination elimination,
                              RevealLedger* ledger = nullptr);

/// Initial bound of `child`'s subtree for `agent` = value under the context:
/// Child_util sliced at the separator assignment. `context` must assign every
/// ancestor of `child` except `agent`.
Cost initial_child_lb(const InferenceResult& inference, AgentId agent, AgentId child,
                      const Assignment& context, Value value, OpCount* ops = nullptr);

/// Sum of best single-side costs of the subtree under the context: each proper
/// descendant j of `child` minimises its own costs toward pseudo parents in
/// Sep(child), and `child` minimises its own costs toward all its parents.
/// `context` must assign Sep(child) except `agent`.
Cost subtree_lb(const Instance& instance, const PseudoTree& tree, AgentId agent, AgentId child,
                const Assignment& context, Value value);

}  // namespace ptisabb
