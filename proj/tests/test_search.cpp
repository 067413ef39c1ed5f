#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "ptisabb/baselines.hpp"
#include "ptisabb/search.hpp"

using namespace ptisabb;

namespace {

struct Config {
  SearchVariant variant;
  std::size_t k;
};

const Config kConfigs[] = {
    {SearchVariant::kNonLocal, 1},
    {SearchVariant::kNonLocal, 2},
    {SearchVariant::kNonLocal, 3},
    {SearchVariant::kNonLocal, kNoDimensionLimit},
    {SearchVariant::kLocal, 2},
    {SearchVariant::kLocal, kNoDimensionLimit},
    {SearchVariant::kNoInference, kNoDimensionLimit},
};

SolveResult solve(const Instance& inst, const PseudoTree& tree, Config c,
                  std::function<void(const Message&)> observer = {}) {
  SolveOptions o;
  o.variant = c.variant;
  o.dimension_limit = c.k;
  o.observer = std::move(observer);
  return solve_pt_isabb(inst, tree, o);
}

/// Two agents: root 0 with a single value, leaf 1 with the given domain.
Instance root_and_leaf(std::vector<Cost> leaf_side, std::vector<Cost> root_side) {
  const std::size_t d = leaf_side.size();
  CostMatrix f01(1, d), f10(d, 1);
  for (std::size_t v = 0; v < d; ++v) {
    f01(0, v) = root_side[v];
    f10(v, 0) = leaf_side[v];
  }
  return Instance({1, d}, {{0, 1, f01, f10}});
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("first_feasible scans from the given value") {
    const std::vector<Cost> lbs{5, 3, 9};
    OpCount ops = 0;
    CHECK(first_feasible(lbs, 4, 0, &ops) == Value{1});
    CHECK(ops == 2);
    CHECK(first_feasible(lbs, kInfinity, 0) == Value{0});
    CHECK(first_feasible(lbs, 10, 1) == Value{1});
    CHECK(first_feasible(lbs, 10, 3) == std::nullopt);
    CHECK(first_feasible(lbs, 3, 0) == std::nullopt);
    const std::vector<Cost> inf{kInfinity, kInfinity};
    CHECK(first_feasible(inf, kInfinity, 0) == std::nullopt);
  }

  TEST_CASE("single agent terminates at once with its first value") {
    const Instance inst({3}, {});
    for (const auto& c : kConfigs) {
      const auto r = solve(inst, build_pseudo_tree(inst), c);
      CHECK(r.cost == 0);
      CHECK(r.assignment.values() == std::vector<Value>{0});
      CHECK(r.metrics.total_messages() == 0);
    }
  }

  TEST_CASE("four-agent example: the root talks to its only child") {
    const auto inst = fixtures::four_agent(3, 3);
    const auto tree = build_pseudo_tree(inst, AgentId{0});
    std::set<AgentId> cpa_targets;
    const auto r = solve(inst, tree, {SearchVariant::kNonLocal, kNoDimensionLimit},
                         [&](const Message& m) {
                           if (m.kind == MessageKind::kCpa && m.sender == 0)
                             cpa_targets.insert(m.receiver);
                         });
    CHECK(cpa_targets == std::set<AgentId>{1});
    CHECK(r.cost == oracle::brute_optimum(inst));
  }

  TEST_CASE("leaf walkthrough with two values") {
    // lb(0) = 1 + 3 = 4, lb(1) = 2 + 4 = 6
    const auto inst = root_and_leaf({1, 2}, {3, 4});
    std::vector<Message> backtracks;
    std::size_t requests = 0;
    const auto r = solve(inst, build_pseudo_tree(inst, AgentId{0}),
                         {SearchVariant::kNoInference, kNoDimensionLimit}, [&](const Message& m) {
                           if (m.kind == MessageKind::kBacktrack) backtracks.push_back(m);
                           if (m.kind == MessageKind::kCostReq) ++requests;
                         });
    REQUIRE(backtracks.size() == 1);
    CHECK(backtracks[0].feasible);
    CHECK(backtracks[0].cost == 4);
    CHECK(backtracks[0].value == 0);
    CHECK(backtracks[0].assignment[1] == 0);
    CHECK(backtracks[0].assignment.assigned_count() == 1);
    CHECK(requests == 2);
    CHECK(r.cost == 4);
    CHECK(r.assignment.values() == std::vector<Value>{0, 0});
  }

  TEST_CASE("COST carries the responder's private entry") {
    // leaf value 0 costs 10 and sets the bound; value 1 asks for f_01(0, 1) = 7
    const auto inst = root_and_leaf({0, 0}, {10, 7});
    std::map<Value, Cost> replies;
    const auto r = solve(inst, build_pseudo_tree(inst, AgentId{0}),
                         {SearchVariant::kNoInference, kNoDimensionLimit}, [&](const Message& m) {
                           if (m.kind == MessageKind::kCost) replies[m.value] = m.cost;
                         });
    CHECK(replies == std::map<Value, Cost>{{0, 10}, {1, 7}});
    CHECK(r.cost == 7);
    CHECK(r.assignment[1] == 1);
  }

  TEST_CASE("a bound no value can beat gives an infeasible BACKTRACK") {
    // root values 0 and 1; the leaf's own side is 5 whatever the root does
    CostMatrix f01(2, 1, 0), f10(1, 2, 5);
    const Instance inst({2, 1}, {{0, 1, f01, f10}});
    std::vector<Message> backtracks;
    std::size_t requests = 0;
    const auto r = solve(inst, build_pseudo_tree(inst, AgentId{0}),
                         {SearchVariant::kNoInference, kNoDimensionLimit}, [&](const Message& m) {
                           if (m.kind == MessageKind::kBacktrack) backtracks.push_back(m);
                           if (m.kind == MessageKind::kCostReq) ++requests;
                         });
    REQUIRE(backtracks.size() == 2);
    CHECK(backtracks[0].feasible);
    CHECK(backtracks[0].cost == 5);
    CHECK_FALSE(backtracks[1].feasible);
    CHECK(backtracks[1].cost == kInfinity);
    CHECK(backtracks[1].assignment.assigned_count() == 0);
    CHECK(requests == 1);
    CHECK(r.cost == 5);
    CHECK(r.assignment.values() == std::vector<Value>{0, 0});

    // with inference the root already knows value 1 cannot win
    std::size_t cpas = 0;
    solve(inst, build_pseudo_tree(inst, AgentId{0}), {SearchVariant::kNonLocal, kNoDimensionLimit},
          [&](const Message& m) { cpas += m.kind == MessageKind::kCpa; });
    CHECK(cpas == 1);
  }

  TEST_CASE("every variant finds the brute-force optimum") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const std::size_t n = 3 + seed % 6;
      const std::size_t d = 2 + seed % 2;
      const double density = n <= 4 ? 1.0 : 0.5 + 0.1 * static_cast<double>(seed % 5);
      const auto inst = seed % 3 == 0
                            ? generate_max_dcsp({n, density, d, 0.4, seed})
                            : generate_random_adcop({n, density, d, 50, seed});
      const auto tree = build_pseudo_tree(inst);
      const Cost opt = oracle::brute_optimum(inst);
      CHECK(brute_force_solve(inst).cost == opt);
      for (const auto& c : kConfigs) {
        const auto r = solve(inst, tree, c);
        CHECK(r.cost == opt);
        REQUIRE(r.assignment.complete());
        CHECK(evaluate(inst, r.assignment) == r.cost);
        CHECK(r.metrics.solution_cost == opt);
        CHECK(r.metrics.count(MessageKind::kTerminate) == n - 1);
      }
    }
  }

  TEST_CASE("MaxDCSP without prohibitions costs nothing") {
    const auto inst = generate_max_dcsp({8, 0.4, 4, 0.0, 3});
    for (const auto& c : kConfigs) CHECK(solve(inst, build_pseudo_tree(inst), c).cost == 0);
  }

  TEST_CASE("no agent sees the same CPA twice") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const auto inst = generate_random_adcop({7, 0.5, 3, 40, seed});
      const auto tree = build_pseudo_tree(inst);
      for (const auto& c : kConfigs) {
        std::map<AgentId, std::set<std::vector<Value>>> seen;
        bool duplicate = false;
        solve(inst, tree, c, [&](const Message& m) {
          if (m.kind != MessageKind::kCpa) return;
          duplicate |= !seen[m.receiver].insert(m.assignment.values()).second;
        });
        CHECK_FALSE(duplicate);
      }
    }
  }

  TEST_CASE("feasible BACKTRACK reports the exact subtree optimum") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const auto inst = generate_random_adcop({6, 0.6, 3, 30, 100 + seed});
      const auto tree = build_pseudo_tree(inst);
      for (const auto& c : kConfigs) {
        const bool inferred = c.variant != SearchVariant::kNoInference;
        const auto inference =
            run_inference(inst, tree, c.k,
                          c.variant == SearchVariant::kLocal ? Elimination::kLocal
                                                             : Elimination::kNonLocal);
        std::map<AgentId, Assignment> last_cpa;
        std::size_t checked = 0;
        solve(inst, tree, c, [&](const Message& m) {
          if (m.kind == MessageKind::kCpa) last_cpa[m.receiver] = m.assignment;
          if (m.kind != MessageKind::kBacktrack) return;
          const AgentId parent = *tree.parent[PseudoTree::idx(m.sender)];
          const Assignment& ctx = last_cpa.at(m.sender);
          CHECK(m.value == ctx[parent]);
          if (!m.feasible) {
            CHECK(m.cost == kInfinity);
            CHECK(m.assignment.assigned_count() == 0);
            return;
          }
          ++checked;
          CHECK(m.cost == oracle::subtree_cost(inst, tree, m.sender, ctx));
          if (inferred) {
            Assignment rest = ctx;
            rest.erase(parent);
            CHECK(m.cost >= initial_child_lb(inference, parent, m.sender, rest, m.value));
          }
          // the reported assignment covers exactly the subtree and achieves the cost
          const auto members = oracle::subtree_of(tree, m.sender);
          CHECK(m.assignment.assigned_count() == members.size());
          Assignment joined = ctx;
          joined.merge(m.assignment);
          Cost sub = 0;
          for (AgentId j : members)
            for (AgentId l : oracle::ancestors_of(tree, j))
              if (inst.constrained(j, l))
                sub += inst.own_cost(j, l, joined[j], joined[l]) +
                       inst.own_cost(l, j, joined[l], joined[j]);
          CHECK(sub == m.cost);
        });
        CHECK(checked > 0);
      }
    }
  }

  TEST_CASE("child bound is the parent's bound minus the other costs") {
    std::size_t multi_child = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto inst = generate_random_adcop({8, 0.3, 3, 30, seed});
      const auto tree = build_pseudo_tree(inst);
      for (const auto& c : kConfigs) {
        SolveOptions o;
        o.variant = c.variant;
        o.dimension_limit = c.k;
        std::size_t traces = 0;
        o.on_cpa_sent = [&](const CpaSendTrace& t) {
          ++traces;
          if (tree.children[PseudoTree::idx(t.agent)].size() > 1 && t.other_children_lb > 0)
            ++multi_child;
          if (t.agent_ub == kInfinity) {
            CHECK(t.child_ub == kInfinity);
          } else {
            CHECK(t.child_ub + t.high_cost + t.other_children_lb == t.agent_ub);
          }
        };
        solve_pt_isabb(inst, tree, o);
        CHECK(traces > 0);
      }
    }
    CHECK(multi_child > 0);
  }

  TEST_CASE("unexplored assignments never beat the optimum") {
    const auto inst = generate_random_adcop({6, 0.5, 3, 30, 77});
    const auto tree = build_pseudo_tree(inst);
    std::set<std::vector<Value>> reached;
    const auto r = solve(inst, tree, {SearchVariant::kNonLocal, 2}, [&](const Message& m) {
      if (m.kind == MessageKind::kBacktrack && m.feasible &&
          tree.parent[PseudoTree::idx(m.sender)] == tree.root)
        reached.insert(m.assignment.values());
    });
    std::vector<AgentId> all{0, 1, 2, 3, 4, 5};
    oracle::enumerate(inst, all, Assignment(6), [&](const Assignment& a) {
      CHECK(oracle::naive_evaluate(inst, a.values()) >= r.cost);
    });
    CHECK_FALSE(reached.empty());
  }

  TEST_CASE("schedule order never changes the optimum") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = generate_random_adcop({8, 0.35, 3, 50, seed});
      const auto tree = build_pseudo_tree(inst);
      const Cost opt = brute_force_solve(inst).cost;
      for (const auto& c : kConfigs)
        for (std::uint64_t s = 0; s < 3; ++s) {
          SolveOptions o;
          o.variant = c.variant;
          o.dimension_limit = c.k;
          o.policy = {SchedulePolicy::Kind::kRandomEdge, s};
          const auto r = solve_pt_isabb(inst, tree, o);
          CHECK(r.cost == opt);
          CHECK(evaluate(inst, r.assignment) == opt);
        }
    }
  }

  TEST_CASE("runs are reproducible") {
    const auto inst = generate_random_adcop({9, 0.3, 3, 100, 4});
    const auto tree = build_pseudo_tree(inst);
    for (const auto& c : kConfigs) {
      const auto a = solve(inst, tree, c);
      const auto b = solve(inst, tree, c);
      CHECK(a.metrics == b.metrics);
      CHECK(a.assignment == b.assignment);
    }
    SolveOptions o;
    o.policy = {SchedulePolicy::Kind::kRandomEdge, 9};
    CHECK(solve_pt_isabb(inst, tree, o).metrics == solve_pt_isabb(inst, tree, o).metrics);
  }

  TEST_CASE("search adds work on top of inference") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = generate_random_adcop({8, 0.4, 3, 50, seed});
      const auto tree = build_pseudo_tree(inst);
      for (std::size_t k : {std::size_t{1}, std::size_t{2}, kNoDimensionLimit}) {
        const auto inf = run_inference(inst, tree, k);
        const auto r = solve(inst, tree, {SearchVariant::kNonLocal, k});
        CHECK(r.metrics.nclo >= inf.metrics.nclo);
        CHECK(r.metrics.count(MessageKind::kUtil) == inst.agent_count() - 1);
      }
    }
  }

  TEST_CASE("an expired deadline raises a timeout") {
    const auto inst = generate_random_adcop({10, 0.5, 3, 100, 1});
    SolveOptions o;
    o.variant = SearchVariant::kNoInference;
    o.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(solve_pt_isabb(inst, build_pseudo_tree(inst), o), TimeoutError);
  }
}
