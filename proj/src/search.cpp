#include "ptisabb/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ptisabb {

std::optional<Value> first_feasible(std::span<const Cost> lower_bounds, Cost ub, Value from,
                                    OpCount* ops) {
  for (auto d = static_cast<std::size_t>(std::max<Value>(from, 0)); d < lower_bounds.size(); ++d) {
    if (ops) ++*ops;
    if (lower_bounds[d] < ub) return static_cast<Value>(d);
  }
  return std::nullopt;
}

namespace {

Elimination elimination_for(SearchVariant variant) {
  return variant == SearchVariant::kLocal ? Elimination::kLocal : Elimination::kNonLocal;
}

}  // namespace

PtIsabbAgent::PtIsabbAgent(AgentId id, const InferenceRules& rules, SearchVariant variant,
                           const SolveOptions* options)
    : InferenceAgent(id, rules),
      variant_(variant),
      options_(options),
      parents_(rules.tree().all_parents(id)),
      children_(rules.tree().children[PseudoTree::idx(id)]) {
  const std::size_t d = rules.instance().domain_size(id);
  high_cost_.assign(d, 0);
  lb_child_.assign(children_.size(), std::vector<Cost>(d, 0));
  reported_.assign(children_.size(), std::vector<char>(d, 0));
  srch_val_.assign(children_.size(), Assignment::kUnassigned);
  cpa_outstanding_.assign(children_.size(), 0);
  child_generation_.assign(children_.size(), 0);
}

bool PtIsabbAgent::is_root() const { return rules().tree().root == id(); }

std::size_t PtIsabbAgent::child_slot(AgentId child) const {
  const auto it = std::find(children_.begin(), children_.end(), child);
  if (it == children_.end())
    throw std::logic_error(std::to_string(child) + " is not a child of " + std::to_string(id()));
  return static_cast<std::size_t>(it - children_.begin());
}

Cost PtIsabbAgent::lb(Value d) const {
  const auto v = static_cast<std::size_t>(d);
  Cost total = high_cost_[v];
  for (const auto& per_child : lb_child_) total = add_cost(total, per_child[v]);
  return total;
}

bool PtIsabbAgent::costs_known(Value d) const {
  return costs_received_[static_cast<std::size_t>(d)] == parents_.size();
}

std::optional<Value> PtIsabbAgent::next_feasible(Value from, AgentContext& ctx) const {
  std::vector<Cost> bounds(domain());
  for (std::size_t d = 0; d < domain(); ++d) bounds[d] = lb(static_cast<Value>(d));
  return first_feasible(bounds, ub_, from, ctx.clock_ptr());
}

void PtIsabbAgent::start(AgentContext& ctx) {
  if (variant_ == SearchVariant::kNoInference) {
    if (is_root()) begin_search(ctx);
    return;
  }
  InferenceAgent::start(ctx);
}

void PtIsabbAgent::on_inference_complete(AgentContext& ctx) {
  if (is_root()) begin_search(ctx);
}

void PtIsabbAgent::begin_search(AgentContext& ctx) {
  cpa_ = Assignment(rules().instance().agent_count());
  ub_ = received_ub_ = kInfinity;
  reset_for_cpa(ctx);
  const auto d = next_feasible(0, ctx);
  if (!d) throw std::logic_error("root has no value with a finite lower bound");
  if (is_leaf()) {
    leaf_explore(d, ctx);
    return;
  }
  for (std::size_t c = 0; c < children_.size(); ++c) {
    srch_val_[c] = *d;
    send_cpa(c, *d, ctx);
  }
}

void PtIsabbAgent::reset_for_cpa(AgentContext& ctx) {
  const auto& instance = rules().instance();
  const std::size_t n = instance.agent_count();
  costs_received_.assign(domain(), 0);
  costs_requested_.assign(domain(), 0);
  complete_.assign(domain(), 0);
  spa_.assign(domain(), Assignment(n));
  for (std::size_t d = 0; d < domain(); ++d) {
    const auto v = static_cast<Value>(d);
    Cost own = 0;
    for (AgentId j : parents_) own += instance.own_cost(id(), j, v, cpa_[j]);
    ctx.charge(parents_.size());
    high_cost_[d] = own;
    spa_[d].set(id(), v);
  }
  for (std::size_t c = 0; c < children_.size(); ++c) {
    std::fill(reported_[c].begin(), reported_[c].end(), 0);
    srch_val_[c] = Assignment::kUnassigned;
    cpa_outstanding_[c] = 0;
    if (variant_ == SearchVariant::kNoInference) {
      std::fill(lb_child_[c].begin(), lb_child_[c].end(), 0);
      continue;
    }
    const UtilityTable& table = child_util().at(children_[c]);
    Assignment context = cpa_;
    for (std::size_t d = 0; d < domain(); ++d) {
      context.set(id(), static_cast<Value>(d));
      lb_child_[c][d] = table.at(context);
    }
    ctx.charge(domain());
  }
  active_ = true;
}

void PtIsabbAgent::on_search_message(const Message& msg, AgentContext& ctx) {
  switch (msg.kind) {
    case MessageKind::kCpa: handle_cpa(msg, ctx); break;
    case MessageKind::kCostReq: handle_cost_req(msg, ctx); break;
    case MessageKind::kCost: handle_cost(msg, ctx); break;
    case MessageKind::kBacktrack: handle_backtrack(msg, ctx); break;
    case MessageKind::kTerminate: handle_terminate(ctx); break;
    default:
      throw std::logic_error("unexpected " + std::string(to_string(msg.kind)) + " at agent " +
                             std::to_string(id()));
  }
}

void PtIsabbAgent::handle_cpa(const Message& msg, AgentContext& ctx) {
  if (rules().tree().parent[PseudoTree::idx(id())] != msg.sender)
    throw std::logic_error("CPA from non-parent " + std::to_string(msg.sender));
  for (AgentId j : parents_)
    if (!msg.assignment.contains(j))
      throw std::invalid_argument("CPA at " + std::to_string(id()) + " lacks a value for " +
                                  std::to_string(j));
  cpa_ = msg.assignment;
  ub_ = received_ub_ = msg.bound;
  generation_ = msg.generation;
  reset_for_cpa(ctx);

  const auto d = next_feasible(0, ctx);
  if (is_leaf() || !d) {
    leaf_explore(d, ctx);
    return;
  }
  for (std::size_t c = 0; c < children_.size(); ++c) srch_val_[c] = *d;
  request_costs(*d, ctx);
}

void PtIsabbAgent::request_costs(Value d, AgentContext& ctx) {
  costs_requested_[static_cast<std::size_t>(d)] = 1;
  if (parents_.empty()) {
    on_costs_complete(d, ctx);
    return;
  }
  for (AgentId j : parents_) {
    Message req;
    req.kind = MessageKind::kCostReq;
    req.receiver = j;
    req.value = d;
    req.generation = generation_;
    ctx.send(std::move(req));
  }
}

void PtIsabbAgent::handle_cost_req(const Message& msg, AgentContext& ctx) {
  const AgentId requester = msg.sender;
  const std::size_t c = child_slot(rules().tree().branch_child(id(), requester));
  if (!cpa_outstanding_[c])
    throw std::logic_error("COST_REQ from " + std::to_string(requester) +
                           " while its branch has no value of " + std::to_string(id()));
  const Value mine = srch_val_[c];
  Message reply;
  reply.kind = MessageKind::kCost;
  reply.receiver = requester;
  reply.value = msg.value;
  reply.generation = msg.generation;
  reply.cost = rules().instance().own_cost(id(), requester, mine, msg.value);
  ctx.charge(1);
  if (ctx.ledger()) ctx.ledger()->record_cost_reply(id(), requester, mine, msg.value);
  ctx.send(std::move(reply));
}

void PtIsabbAgent::handle_cost(const Message& msg, AgentContext& ctx) {
  if (!active_ || msg.generation != generation_) return;  // stale reply
  const Value d = msg.value;
  if (d < 0 || static_cast<std::size_t>(d) >= domain() ||
      !costs_requested_[static_cast<std::size_t>(d)] || costs_known(d))
    throw std::logic_error("COST for a value that is not pending at " + std::to_string(id()));
  auto& cost = high_cost_[static_cast<std::size_t>(d)];
  cost = add_cost(cost, msg.cost);
  ++costs_received_[static_cast<std::size_t>(d)];
  if (costs_known(d)) on_costs_complete(d, ctx);
}

void PtIsabbAgent::on_costs_complete(Value d, AgentContext& ctx) {
  if (is_leaf()) {
    complete_[static_cast<std::size_t>(d)] = 1;
    ub_ = std::min(ub_, lb(d));
    leaf_explore(next_feasible(d + 1, ctx), ctx);
    return;
  }
  ctx.charge(1);
  const bool expand = lb(d) < ub_;
  for (std::size_t c = 0; c < children_.size(); ++c) {
    if (srch_val_[c] != d || cpa_outstanding_[c]) continue;
    if (expand)
      send_cpa(c, d, ctx);
    else
      advance_child(c, d + 1, ctx);
  }
  check_exhausted(ctx);
}

void PtIsabbAgent::leaf_explore(std::optional<Value> d, AgentContext& ctx) {
  if (d) {
    request_costs(*d, ctx);
  } else if (is_root()) {
    finish_root(ctx);
  } else {
    backtrack_to_parent(ctx);
  }
}

void PtIsabbAgent::advance_child(std::size_t c, Value from, AgentContext& ctx) {
  const auto next = next_feasible(from, ctx);
  srch_val_[c] = next.value_or(Assignment::kUnassigned);
  if (!next) return;
  if (costs_known(*next))
    send_cpa(c, *next, ctx);
  else if (!costs_requested_[static_cast<std::size_t>(*next)])
    request_costs(*next, ctx);
}

void PtIsabbAgent::send_cpa(std::size_t c, Value d, AgentContext& ctx) {
  const auto v = static_cast<std::size_t>(d);
  Cost others = 0;
  for (std::size_t o = 0; o < children_.size(); ++o)
    if (o != c) others = add_cost(others, lb_child_[o][v]);
  const Cost child_ub = sub_cost(sub_cost(ub_, high_cost_[v]), others);

  Message cpa;
  cpa.kind = MessageKind::kCpa;
  cpa.receiver = children_[c];
  cpa.assignment = cpa_;
  cpa.assignment.set(id(), d);
  cpa.bound = child_ub;
  cpa.generation = ++child_generation_[c];
  cpa_outstanding_[c] = 1;
  if (options_ && options_->on_cpa_sent)
    options_->on_cpa_sent(
        CpaSendTrace{id(), children_[c], d, ub_, high_cost_[v], others, child_ub});
  ctx.send(std::move(cpa));
}

void PtIsabbAgent::handle_backtrack(const Message& msg, AgentContext& ctx) {
  const std::size_t c = child_slot(msg.sender);
  if (!active_ || !cpa_outstanding_[c] || msg.generation != child_generation_[c] ||
      msg.value != srch_val_[c])
    throw std::logic_error("BACKTRACK from " + std::to_string(msg.sender) +
                           " for a value it is not exploring");
  const Value d = msg.value;
  const auto v = static_cast<std::size_t>(d);
  cpa_outstanding_[c] = 0;
  reported_[c][v] = 1;
  lb_child_[c][v] = msg.feasible ? msg.cost : kInfinity;
  if (msg.feasible) spa_[v].merge(msg.assignment);

  const bool all_reported = std::all_of(reported_.begin(), reported_.end(),
                                        [v](const std::vector<char>& r) { return r[v] != 0; });
  if (all_reported) {
    complete_[v] = 1;
    ub_ = std::min(ub_, lb(d));
  }
  advance_child(c, d + 1, ctx);
  check_exhausted(ctx);
}

void PtIsabbAgent::check_exhausted(AgentContext& ctx) {
  if (!active_) return;
  const bool exhausted = std::all_of(srch_val_.begin(), srch_val_.end(),
                                     [](Value v) { return v == Assignment::kUnassigned; });
  if (!exhausted) return;
  if (is_root())
    finish_root(ctx);
  else
    backtrack_to_parent(ctx);
}

std::optional<Value> PtIsabbAgent::best_complete_value() const {
  std::optional<Value> best;
  for (std::size_t d = 0; d < domain(); ++d) {
    if (!complete_[d]) continue;
    const auto v = static_cast<Value>(d);
    if (!is_finite(lb(v))) continue;
    if (!best || lb(v) < lb(*best)) best = v;
  }
  return best;
}

void PtIsabbAgent::finish_root(AgentContext& ctx) {
  const auto best = best_complete_value();
  if (!best) throw std::logic_error("root finished without a complete value");
  best_cost_ = lb(*best);
  best_assignment_ = spa_[static_cast<std::size_t>(*best)];
  active_ = false;
  handle_terminate(ctx);
}

void PtIsabbAgent::backtrack_to_parent(AgentContext& ctx) {
  const AgentId parent = *rules().tree().parent[PseudoTree::idx(id())];
  const auto best = best_complete_value();
  Message bt;
  bt.kind = MessageKind::kBacktrack;
  bt.receiver = parent;
  bt.value = cpa_[parent];
  bt.generation = generation_;
  // a subtree cost is reported only when it beats the bound handed down;
  // otherwise pruned values may hide a cheaper assignment
  if (best && lb(*best) < received_ub_) {
    bt.feasible = true;
    bt.cost = lb(*best);
    bt.assignment = spa_[static_cast<std::size_t>(*best)];
  } else {
    bt.feasible = false;
    bt.cost = kInfinity;
    bt.assignment = Assignment(rules().instance().agent_count());
  }
  active_ = false;
  ctx.send(std::move(bt));
}

void PtIsabbAgent::handle_terminate(AgentContext& ctx) {
  for (AgentId c : children_) {
    Message t;
    t.kind = MessageKind::kTerminate;
    t.receiver = c;
    ctx.send(std::move(t));
  }
  active_ = false;
  terminated_ = true;
}

SolveResult solve_pt_isabb(const Instance& instance, const PseudoTree& tree,
                           const SolveOptions& options) {
  const std::size_t limit =
      options.variant == SearchVariant::kNoInference ? kNoDimensionLimit : options.dimension_limit;
  const InferenceRules rules(instance, tree, limit, elimination_for(options.variant));
  std::vector<std::unique_ptr<Agent>> agents;
  for (std::size_t a = 0; a < instance.agent_count(); ++a)
    agents.push_back(
        std::make_unique<PtIsabbAgent>(static_cast<AgentId>(a), rules, options.variant, &options));

  RevealLedger ledger(instance);
  SimulationOptions sim_options;
  sim_options.policy = options.policy;
  sim_options.deadline = options.deadline;
  sim_options.observer = options.observer;
  auto sim = run_simulation(agents, {}, sim_options, &ledger);

  const auto& root = static_cast<const PtIsabbAgent&>(*agents[PseudoTree::idx(tree.root)]);
  SolveResult result;
  result.cost = root.best_cost();
  result.assignment = root.best_assignment();
  result.metrics = sim.metrics;
  result.metrics.solution_cost = result.cost;
  return result;
}

}  // namespace ptisabb
