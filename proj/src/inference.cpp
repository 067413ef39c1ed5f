#include "ptisabb/inference.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ptisabb {

InferenceRules::InferenceRules(const Instance& instance, const PseudoTree& tree,
                               std::size_t dimension_limit, Elimination elimination)
    : instance_(&instance),
      tree_(&tree),
      order_(tree.dimension_rank()),
      limit_(dimension_limit),
      elimination_(elimination) {
  if (limit_ == 0) throw std::invalid_argument("dimension limit must be at least 1");
}

UtilityTable InferenceRules::local_util(AgentId agent, OpCount* ops) const {
  const auto parents = tree_->all_parents(agent);
  if (parents.empty())
    throw std::invalid_argument("local_util: agent " + std::to_string(agent) +
                                " has no parents");
  UtilityTable t = UtilityTable::from_side(*instance_, agent, parents.front(), order_);
  if (ops) *ops += t.size();
  for (std::size_t k = 1; k < parents.size(); ++k) {
    const auto side = UtilityTable::from_side(*instance_, agent, parents[k], order_);
    if (ops) *ops += side.size();
    t = join(t, side, order_, ops);
  }
  return t;
}

UtilityTable InferenceRules::outgoing(AgentId sender,
                                      const std::map<AgentId, UtilityTable>& child_util,
                                      OpCount* ops) const {
  UtilityTable t = local_util(sender, ops);
  for (const auto& [child, table] : child_util) t = join(t, table, order_, ops);
  if (elimination_ == Elimination::kLocal) t = min_project(t, sender, ops);
  return drop_to_limit(t, limit_, order_, ops);
}

UtilityTable InferenceRules::absorb(AgentId receiver, AgentId child, const UtilityTable& received,
                                    OpCount* ops) const {
  if (elimination_ == Elimination::kLocal) return received;
  const auto side = UtilityTable::from_side(*instance_, receiver, child, order_);
  if (ops) *ops += side.size();
  return min_project(join(side, received, order_, ops), child, ops);
}

InferenceAgent::InferenceAgent(AgentId id, const InferenceRules& rules)
    : Agent(id), rules_(&rules) {}

void InferenceAgent::start(AgentContext& ctx) { maybe_finish(ctx); }

void InferenceAgent::receive(const Message& msg, AgentContext& ctx) {
  if (msg.kind != MessageKind::kUtil) {
    on_search_message(msg, ctx);
    return;
  }
  const auto& children = rules_->tree().children[PseudoTree::idx(id())];
  if (std::find(children.begin(), children.end(), msg.sender) == children.end())
    throw std::logic_error("UTIL from non-child " + std::to_string(msg.sender));
  if (child_util_.contains(msg.sender))
    throw std::logic_error("duplicate UTIL from " + std::to_string(msg.sender));
  if (rules_->elimination() == Elimination::kNonLocal && ctx.ledger())
    ctx.ledger()->record_util_shipment(msg.sender, id(), *msg.table);
  child_util_.emplace(msg.sender, rules_->absorb(id(), msg.sender, *msg.table, ctx.clock_ptr()));
  maybe_finish(ctx);
}

void InferenceAgent::on_search_message(const Message& msg, AgentContext&) {
  throw std::logic_error(std::string("inference agent got ") + std::string(to_string(msg.kind)));
}

void InferenceAgent::maybe_finish(AgentContext& ctx) {
  if (inference_done_) return;
  const auto& tree = rules_->tree();
  if (child_util_.size() != tree.children[PseudoTree::idx(id())].size()) return;
  if (const auto parent = tree.parent[PseudoTree::idx(id())]) {
    shipped_ = rules_->outgoing(id(), child_util_, ctx.clock_ptr());
    Message util;
    util.kind = MessageKind::kUtil;
    util.receiver = *parent;
    util.table = std::make_shared<const UtilityTable>(*shipped_);
    ctx.send(std::move(util));
  }
  inference_done_ = true;
  on_inference_complete(ctx);
}

InferenceResult run_inference(const Instance& instance, const PseudoTree& tree,
                              std::size_t dimension_limit, Elimination elimination,
                              RevealLedger* ledger) {
  const InferenceRules rules(instance, tree, dimension_limit, elimination);
  std::vector<std::unique_ptr<Agent>> agents;
  for (std::size_t a = 0; a < instance.agent_count(); ++a)
    agents.push_back(std::make_unique<InferenceAgent>(static_cast<AgentId>(a), rules));
  auto sim = run_simulation(agents, {}, {}, ledger);

  InferenceResult result;
  for (const auto& agent : agents) {
    const auto& ia = static_cast<const InferenceAgent&>(*agent);
    result.child_util.push_back(ia.child_util());
    result.shipped.push_back(ia.shipped());
    if (ia.shipped()) result.util_msg_entries += ia.shipped()->size();
  }
  result.util_msg_count = sim.metrics.count(MessageKind::kUtil);
  result.clocks = std::move(sim.clocks);
  result.metrics = sim.metrics;
  return result;
}

InferenceResult run_inference(const Instance& instance, const PseudoTree& tree,
                              std::size_t dimension_limit, RevealLedger* ledger) {
  return run_inference(instance, tree, dimension_limit, Elimination::kNonLocal, ledger);
}

InferenceResult run_inference_local(const Instance& instance, const PseudoTree& tree,
                                    std::size_t dimension_limit, RevealLedger* ledger) {
  return run_inference(instance, tree, dimension_limit, Elimination::kLocal, ledger);
}

Cost initial_child_lb(const InferenceResult& inference, AgentId agent, AgentId child,
                      const Assignment& context, Value value, OpCount* ops) {
  const auto& tables = inference.child_util.at(PseudoTree::idx(agent));
  const auto it = tables.find(child);
  if (it == tables.end())
    throw std::invalid_argument("no Child_util of " + std::to_string(child) + " at " +
                                std::to_string(agent));
  Assignment full = context;
  full.set(agent, value);
  if (ops) ++*ops;
  return it->second.at(full);
}

Cost subtree_lb(const Instance& instance, const PseudoTree& tree, AgentId agent, AgentId child,
                const Assignment& context, Value value) {
  if (tree.parent[PseudoTree::idx(child)] != agent)
    throw std::invalid_argument(std::to_string(child) + " is not a child of " +
                                std::to_string(agent));
  if (value < 0 || static_cast<std::size_t>(value) >= instance.domain_size(agent))
    throw std::out_of_range("subtree_lb: value out of domain");
  Assignment ctx = context;
  ctx.set(agent, value);
  const auto& sep = tree.sep[PseudoTree::idx(child)];
  for (AgentId l : sep)
    if (!ctx.contains(l))
      throw std::invalid_argument("subtree_lb: separator agent " + std::to_string(l) +
                                  " unassigned");
  auto in_sep = [&](AgentId l) { return std::find(sep.begin(), sep.end(), l) != sep.end(); };

  // min over x of the sum of `owner`'s own costs toward `targets`
  auto best_single_side = [&](AgentId owner, const std::vector<AgentId>& targets) {
    Cost best = kInfinity;
    for (std::size_t x = 0; x < instance.domain_size(owner); ++x) {
      Cost sum = 0;
      for (AgentId l : targets) sum += instance.own_cost(owner, l, static_cast<Value>(x), ctx[l]);
      best = std::min(best, sum);
    }
    return best;
  };

  Cost total = 0;
  for (AgentId j : tree.descendants(child)) {
    std::vector<AgentId> targets;
    for (AgentId l : tree.pseudo_parents[PseudoTree::idx(j)])
      if (in_sep(l)) targets.push_back(l);
    total += best_single_side(j, targets);
  }
  total += best_single_side(child, tree.all_parents(child));
  return total;
}

}  // namespace ptisabb
