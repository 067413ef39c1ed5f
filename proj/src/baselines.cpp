#include "ptisabb/baselines.hpp"

#include <algorithm>
#include <string>

namespace ptisabb {

BruteForceResult brute_force_solve(const Instance& instance, std::uint64_t cap) {
  const std::size_t n = instance.agent_count();
  std::uint64_t space = 1;
  for (std::size_t d : instance.domains()) {
    if (space > cap / d)
      throw SearchSpaceTooLarge("search space exceeds the brute-force cap of " +
                                std::to_string(cap));
    space *= d;
  }

  std::vector<Value> values(n, 0);
  BruteForceResult best{kInfinity, Assignment(n)};
  for (;;) {
    const Assignment candidate(values);
    const Cost cost = evaluate(instance, candidate);
    if (cost < best.cost) best = {cost, candidate};
    std::size_t k = n;
    while (k-- > 0) {
      if (static_cast<std::size_t>(++values[k]) < instance.domain_size(static_cast<AgentId>(k)))
        break;
      values[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return best;
}

namespace {

class SabbAgent : public Agent {
 public:
  SabbAgent(AgentId id, const Instance& instance, const ChainOrder& order, std::size_t position)
      : Agent(id), instance_(instance), order_(order), position_(position) {
    for (std::size_t p = 0; p < position; ++p)
      if (instance.constrained(id, order[p])) earlier_.push_back(order[p]);
  }

  void start(AgentContext& ctx) override {
    if (position_ != 0) return;
    cpa_ = Assignment(instance_.agent_count());
    acc_ = 0;
    try_from(0, ctx);
  }

  void receive(const Message& msg, AgentContext& ctx) override {
    switch (msg.kind) {
      case MessageKind::kCpa:
        cpa_ = msg.assignment;
        acc_ = msg.cost;
        ub_ = std::min(ub_, msg.bound);
        try_from(0, ctx);
        break;
      case MessageKind::kCostReq: {
        Message reply;
        reply.kind = MessageKind::kCost;
        reply.receiver = msg.sender;
        reply.value = msg.value;
        reply.cost = instance_.own_cost(id(), msg.sender, value_, msg.value);
        ctx.charge(1);
        if (ctx.ledger()) ctx.ledger()->record_cost_reply(id(), msg.sender, value_, msg.value);
        ctx.send(std::move(reply));
        break;
      }
      case MessageKind::kCost:
        if (msg.value != value_ || pending_ == 0)
          throw std::logic_error("unexpected COST at agent " + std::to_string(id()));
        other_ += msg.cost;
        if (--pending_ == 0) evaluate_value(ctx);
        break;
      case MessageKind::kBacktrack:
        ub_ = std::min(ub_, msg.bound);
        try_from(value_ + 1, ctx);
        break;
      case MessageKind::kSolution:
        ub_ = std::min(ub_, msg.cost);
        best_ = msg.assignment;
        break;
      case MessageKind::kTerminate:
        terminated_ = true;
        break;
      default:
        throw std::logic_error("unexpected " + std::string(to_string(msg.kind)) + " at agent " +
                               std::to_string(id()));
    }
  }

  bool terminated() const override { return terminated_; }
  Cost ub() const { return ub_; }
  const Assignment& best() const { return best_; }

 private:
  bool is_last() const { return position_ + 1 == order_.size(); }

  void try_from(Value from, AgentContext& ctx) {
    for (auto d = static_cast<std::size_t>(from); d < instance_.domain_size(id()); ++d) {
      const auto v = static_cast<Value>(d);
      Cost own = 0;
      for (AgentId j : earlier_) own += instance_.own_cost(id(), j, v, cpa_[j]);
      ctx.charge(earlier_.size() + 1);
      if (acc_ + own >= ub_) continue;
      value_ = v;
      own_ = own;
      other_ = 0;
      pending_ = earlier_.size();
      if (pending_ == 0) {
        evaluate_value(ctx);
        return;
      }
      for (AgentId j : earlier_) {
        Message req;
        req.kind = MessageKind::kCostReq;
        req.receiver = j;
        req.value = v;
        ctx.send(std::move(req));
      }
      return;
    }
    value_ = static_cast<Value>(instance_.domain_size(id()));
    if (position_ == 0) {
      for (AgentId a : order_) {
        if (a == id()) continue;
        Message t;
        t.kind = MessageKind::kTerminate;
        t.receiver = a;
        ctx.send(std::move(t));
      }
      terminated_ = true;
      return;
    }
    Message bt;
    bt.kind = MessageKind::kBacktrack;
    bt.receiver = order_[position_ - 1];
    bt.bound = ub_;
    ctx.send(std::move(bt));
  }

  void evaluate_value(AgentContext& ctx) {
    const Cost total = acc_ + own_ + other_;
    ctx.charge(1);
    if (total >= ub_) {
      try_from(value_ + 1, ctx);
      return;
    }
    Assignment extended = cpa_;
    extended.set(id(), value_);
    if (is_last()) {
      ub_ = total;
      best_ = extended;
      for (AgentId a : order_) {
        if (a == id()) continue;
        Message s;
        s.kind = MessageKind::kSolution;
        s.receiver = a;
        s.assignment = extended;
        s.cost = total;
        ctx.send(std::move(s));
      }
      try_from(value_ + 1, ctx);
      return;
    }
    Message cpa;
    cpa.kind = MessageKind::kCpa;
    cpa.receiver = order_[position_ + 1];
    cpa.assignment = std::move(extended);
    cpa.cost = total;
    cpa.bound = ub_;
    ctx.send(std::move(cpa));
  }

  const Instance& instance_;
  const ChainOrder& order_;
  std::size_t position_;
  std::vector<AgentId> earlier_;

  Assignment cpa_;
  Cost acc_ = 0;
  Cost ub_ = kInfinity;
  Value value_ = 0;
  Cost own_ = 0;
  Cost other_ = 0;
  std::size_t pending_ = 0;
  Assignment best_;
  bool terminated_ = false;
};

}  // namespace

SolveResult solve_sabb(const Instance& instance, const ChainOrder& order,
                       const SabbOptions& options) {
  const std::size_t n = instance.agent_count();
  if (order.size() != n) throw std::invalid_argument("chain order must list every agent once");
  std::vector<char> seen(n, 0);
  for (AgentId a : order) {
    if (a < 0 || static_cast<std::size_t>(a) >= n || seen[static_cast<std::size_t>(a)])
      throw std::invalid_argument("chain order must be a permutation of the agents");
    seen[static_cast<std::size_t>(a)] = 1;
  }

  std::vector<std::unique_ptr<Agent>> agents(n);
  for (std::size_t p = 0; p < n; ++p)
    agents[static_cast<std::size_t>(order[p])] =
        std::make_unique<SabbAgent>(order[p], instance, order, p);

  RevealLedger ledger(instance);
  SimulationOptions sim_options;
  sim_options.policy = options.policy;
  sim_options.deadline = options.deadline;
  sim_options.observer = options.observer;
  auto sim = run_simulation(agents, {}, sim_options, &ledger);

  const auto& last = static_cast<const SabbAgent&>(*agents[static_cast<std::size_t>(order.back())]);
  SolveResult result;
  result.cost = last.ub();
  result.assignment = last.best();
  result.metrics = sim.metrics;
  result.metrics.solution_cost = result.cost;
  return result;
}

}  // namespace ptisabb
