#include <memory>

#include "doctest.h"
#include "fixtures.hpp"
#include "ptisabb/baselines.hpp"
#include "ptisabb/inference.hpp"
#include "ptisabb/search.hpp"
#include "ptisabb/simulator.hpp"

using namespace ptisabb;

namespace {

/// Agent 0 charges work and sends `count` numbered messages to agent 1,
/// which records what it saw.
class Sender : public Agent {
 public:
  Sender(AgentId id, int count) : Agent(id), count_(count) {}
  void start(AgentContext& ctx) override {
    for (int k = 0; k < count_; ++k) {
      ctx.charge(10);
      Message m;
      m.kind = MessageKind::kCost;
      m.receiver = 1;
      m.value = k;
      ctx.send(std::move(m));
    }
  }
  void receive(const Message&, AgentContext&) override {}
  bool terminated() const override { return true; }

 private:
  int count_;
};

class Recorder : public Agent {
 public:
  explicit Recorder(AgentId id, std::size_t expected) : Agent(id), expected_(expected) {}
  void receive(const Message& msg, AgentContext& ctx) override {
    values.push_back(msg.value);
    clocks_seen.push_back(ctx.clock());
    ctx.charge(1);
  }
  bool terminated() const override { return values.size() == expected_; }

  std::vector<Value> values;
  std::vector<OpCount> clocks_seen;

 private:
  std::size_t expected_;
};

class Idle : public Agent {
 public:
  using Agent::Agent;
  void receive(const Message&, AgentContext&) override {}
  bool terminated() const override { return false; }
};

}  // namespace

TEST_SUITE("sim") {
  TEST_CASE("FIFO delivery and clock stamping") {
    for (auto kind : {SchedulePolicy::Kind::kOldestFirst, SchedulePolicy::Kind::kRandomEdge}) {
      std::vector<std::unique_ptr<Agent>> agents;
      agents.push_back(std::make_unique<Sender>(0, 3));
      agents.push_back(std::make_unique<Recorder>(1, 3));
      SimulationOptions o;
      o.policy.kind = kind;
      const auto r = run_simulation(agents, {}, o);
      const auto& rec = static_cast<const Recorder&>(*agents[1]);
      CHECK(rec.values == std::vector<Value>{0, 1, 2});
      // stamps 10, 20, 30; the receiver adds one op per message
      CHECK(rec.clocks_seen == std::vector<OpCount>{10, 20, 30});
      CHECK(r.clocks == std::vector<OpCount>{30, 31});
      CHECK(r.metrics.nclo == 31);
      CHECK(r.metrics.count(MessageKind::kCost) == 3);
      CHECK(r.metrics.traffic == 6);
    }
  }

  TEST_CASE("drained queues with a live agent is a deadlock") {
    std::vector<std::unique_ptr<Agent>> agents;
    agents.push_back(std::make_unique<Idle>(0));
    CHECK_THROWS_AS(run_simulation(agents, {}), DeadlockError);
  }

  TEST_CASE("agents must be indexed by id") {
    std::vector<std::unique_ptr<Agent>> agents;
    agents.push_back(std::make_unique<Idle>(1));
    CHECK_THROWS_AS(run_simulation(agents, {}), std::invalid_argument);
  }

  TEST_CASE("message sizes") {
    Message m;
    m.kind = MessageKind::kUtil;
    m.table = std::make_shared<UtilityTable>(UtilityTable::constant({0, 1}, {3, 4}, 0));
    CHECK(m.size() == 12);
    m.kind = MessageKind::kCpa;
    m.assignment = Assignment(5);
    CHECK(m.size() == 6);
    m.kind = MessageKind::kCostReq;
    CHECK(m.size() == 2);
    m.kind = MessageKind::kCost;
    CHECK(m.size() == 2);
    m.kind = MessageKind::kBacktrack;
    m.assignment.set(2, 1);
    m.assignment.set(3, 0);
    CHECK(m.size() == 5);
    m.kind = MessageKind::kTerminate;
    CHECK(m.size() == 1);
    CHECK(to_string(MessageKind::kBacktrack) == "BACKTRACK");
  }

  TEST_CASE("one COST reply reveals one entry exactly") {
    const auto inst = fixtures::four_agent();
    RevealLedger ledger(inst);
    CHECK(ledger.privacy_loss() == 0.0);
    ledger.record_cost_reply(1, 3, 2, 0);
    CHECK(ledger.count(RevealLevel::kExact) == 1);
    CHECK(ledger.level(1, 3, 2, 0) == RevealLevel::kExact);
    CHECK(ledger.side_loss(1, 3) == doctest::Approx(1.0 / 9));
    CHECK(ledger.privacy_loss() == doctest::Approx(1.0 / 72));
    ledger.escalate(1, 3, 2, 0, RevealLevel::kFeasibility);
    CHECK(ledger.level(1, 3, 2, 0) == RevealLevel::kExact);
  }

  TEST_CASE("revealing everything costs a full unit") {
    const auto inst = fixtures::four_agent(2);
    RevealLedger ledger(inst);
    for (const auto& c : inst.constraints())
      for (Value a = 0; a < 2; ++a)
        for (Value b = 0; b < 2; ++b) {
          ledger.record_cost_reply(c.i, c.j, a, b);
          ledger.record_cost_reply(c.j, c.i, b, a);
        }
    CHECK(ledger.privacy_loss() == doctest::Approx(1.0));
  }

  TEST_CASE("zero tables on a tree edge reveal half of the child's side") {
    const auto inst = fixtures::make_instance(2, 3, {{0, 1}}, 1, 0);
    const auto tree = build_pseudo_tree(inst, AgentId{0});
    RevealLedger ledger(inst);
    const auto inf = run_inference(inst, tree, kNoDimensionLimit, &ledger);
    CHECK(ledger.side_loss(1, 0) == doctest::Approx(0.5));
    CHECK(ledger.side_loss(0, 1) == 0.0);
    CHECK(inf.metrics.privacy_loss == doctest::Approx(0.25));

    RevealLedger local(inst);
    const auto loc = run_inference_local(inst, tree, kNoDimensionLimit, &local);
    CHECK(local.privacy_loss() == 0.0);
    CHECK(loc.metrics.privacy_loss == 0.0);
  }

  TEST_CASE("only zero entries are flagged and dropped parents hide everything") {
    const auto inst = fixtures::make_instance(3, 2, {{0, 1}, {1, 2}}, 1);
    RevealLedger ledger(inst);
    // table over (x1, x2): zero only at x1 = 0, x2 = 1
    const UtilityTable t({1, 2}, {2, 2}, {5, 0, 3, 4});
    ledger.record_util_shipment(2, 1, t);
    CHECK(ledger.level(2, 1, 1, 0) == RevealLevel::kFeasibility);
    CHECK(ledger.count(RevealLevel::kFeasibility) == 1);
    ledger.record_util_shipment(2, 1, UtilityTable::constant({2}, {2}, 0));
    CHECK(ledger.count(RevealLevel::kFeasibility) == 1);
  }

  TEST_CASE("local elimination reveals nothing during inference") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto inst = generate_max_dcsp({8, 0.4, 4, 0.2, seed});
      RevealLedger ledger(inst);
      run_inference_local(inst, build_pseudo_tree(inst), kNoDimensionLimit, &ledger);
      CHECK(ledger.privacy_loss() == 0.0);
    }
  }

  TEST_CASE("privacy loss stays in [0, 1] for every algorithm") {
    const auto inst = generate_max_dcsp({8, 0.4, 3, 0.3, 3});
    const auto tree = build_pseudo_tree(inst);
    for (auto v : {SearchVariant::kNonLocal, SearchVariant::kLocal, SearchVariant::kNoInference}) {
      SolveOptions o;
      o.variant = v;
      const auto r = solve_pt_isabb(inst, tree, o);
      CHECK(r.metrics.privacy_loss >= 0.0);
      CHECK(r.metrics.privacy_loss <= 1.0);
    }
    const auto s = solve_sabb(inst, tree.order);
    CHECK(s.metrics.privacy_loss > 0.0);
    CHECK(s.metrics.privacy_loss <= 1.0);
  }

  TEST_CASE("observer sees every counted message") {
    const auto inst = generate_random_adcop({7, 0.4, 3, 50, 2});
    std::uint64_t seen = 0;
    SolveOptions o;
    o.observer = [&](const Message&) { ++seen; };
    const auto r = solve_pt_isabb(inst, build_pseudo_tree(inst), o);
    CHECK(seen == r.metrics.total_messages());
  }
}
