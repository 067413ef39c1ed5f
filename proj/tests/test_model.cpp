#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "ptisabb/baselines.hpp"
#include "ptisabb/instance_io.hpp"
#include "ptisabb/model.hpp"

using namespace ptisabb;

TEST_SUITE("model") {
  TEST_CASE("complete random ADCOP has every pair constrained") {
    const auto inst = generate_random_adcop({8, 1.0, 3, 100, 3});
    CHECK(inst.constraints().size() == 28);
    std::size_t tables = 0;
    for (const auto& c : inst.constraints()) {
      CHECK(c.fij.data().size() == 9);
      CHECK(c.fji.data().size() == 9);
      tables += 2;
    }
    CHECK(tables == 56);
    CHECK(inst.total_side_entries() == 56 * 9);
  }

  TEST_CASE("sparse random ADCOP edge count and connectivity") {
    const auto inst = generate_random_adcop({8, 0.25, 3, 100, 1});
    CHECK(inst.constraints().size() == 7);
    CHECK(edge_count_for(8, 0.25) == 7);
    CHECK(inst.is_connected());
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      CHECK(generate_random_adcop({12, 0.3, 3, 100, seed}).is_connected());
  }

  TEST_CASE("costs lie in [0, max_cost]") {
    const auto inst = generate_random_adcop({6, 0.6, 4, 17, 5});
    for (const auto& c : inst.constraints())
      for (const auto* m : {&c.fij, &c.fji})
        for (Cost v : m->data()) {
          CHECK(v >= 0);
          CHECK(v <= 17);
        }
  }

  TEST_CASE("generators are deterministic in the seed") {
    CHECK(generate_random_adcop({5, 0.5, 3, 100, 7}) == generate_random_adcop({5, 0.5, 3, 100, 7}));
    CHECK_FALSE(generate_random_adcop({5, 0.5, 3, 100, 7}) ==
                generate_random_adcop({5, 0.5, 3, 100, 8}));
    CHECK(generate_max_dcsp({6, 0.5, 4, 0.3, 2}) == generate_max_dcsp({6, 0.5, 4, 0.3, 2}));
  }

  TEST_CASE("too sparse a density is rejected") {
    CHECK_THROWS_AS(generate_random_adcop({6, 0.25, 3, 100, 1}), std::invalid_argument);
    CHECK_THROWS_AS(generate_random_adcop({1, 1.0, 3, 100, 1}), std::invalid_argument);
    CHECK_THROWS_AS(generate_max_dcsp({5, 0.5, 3, 1.5, 1}), std::invalid_argument);
  }

  TEST_CASE("MaxDCSP tightness extremes") {
    const auto zero = generate_max_dcsp({6, 0.6, 3, 0.0, 4});
    for (const auto& c : zero.constraints()) {
      for (Cost v : c.fij.data()) CHECK(v == 0);
      for (Cost v : c.fji.data()) CHECK(v == 0);
    }
    CHECK(brute_force_solve(zero).cost == 0);

    const auto full = generate_max_dcsp({6, 0.6, 3, 1.0, 4});
    const Cost expected = 2 * static_cast<Cost>(full.constraints().size());
    CHECK(brute_force_solve(full).cost == expected);
    CHECK(evaluate(full, Assignment(std::vector<Value>(6, 2))) == expected);
  }

  TEST_CASE("MaxDCSP prohibited fraction tracks tightness") {
    const auto inst = generate_max_dcsp({10, 0.4, 10, 0.3, 11});
    std::size_t ones = 0, total = 0;
    for (const auto& c : inst.constraints())
      for (const auto* m : {&c.fij, &c.fji})
        for (Cost v : m->data()) {
          CHECK((v == 0 || v == 1));
          ones += v == 1;
          ++total;
        }
    const double frac = static_cast<double>(ones) / static_cast<double>(total);
    CHECK(frac == doctest::Approx(0.3).epsilon(0.05 / 0.3));
  }

  TEST_CASE("MaxDCSP optimum stays within [0, 2|C|]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = generate_max_dcsp({6, 0.5, 3, 0.5, seed});
      const Cost opt = brute_force_solve(inst).cost;
      CHECK(opt >= 0);
      CHECK(opt <= 2 * static_cast<Cost>(inst.constraints().size()));
    }
  }

  TEST_CASE("evaluate sums both sides") {
    CostMatrix f12(1, 1, 3), f21(1, 1, 5);
    const Instance inst({1, 1}, {{0, 1, f12, f21}});
    CHECK(evaluate(inst, Assignment(std::vector<Value>{0, 0})) == 8);
  }

  TEST_CASE("evaluate matches a naive summation") {
    for (unsigned seed = 0; seed < 10; ++seed) {
      const auto inst = fixtures::make_instance(4, 3, fixtures::complete_edges(4), seed);
      std::mt19937 rng(seed);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<Value> v(4);
        for (auto& x : v) x = static_cast<Value>(rng() % 3);
        CHECK(evaluate(inst, Assignment(v)) == oracle::naive_evaluate(inst, v));
      }
    }
  }

  TEST_CASE("constraint order and orientation do not matter") {
    const auto inst = fixtures::four_agent(3, 4);
    std::vector<Constraint> flipped;
    for (const auto& c : inst.constraints()) flipped.push_back({c.j, c.i, c.fji, c.fij});
    std::reverse(flipped.begin(), flipped.end());
    const Instance again(inst.domains(), flipped);
    CHECK(again == inst);
    const Assignment a(std::vector<Value>{2, 0, 1, 2});
    CHECK(evaluate(again, a) == evaluate(inst, a));
  }

  TEST_CASE("evaluate rejects incomplete or out-of-domain assignments") {
    const auto inst = fixtures::four_agent();
    Assignment partial(4);
    partial.set(0, 1);
    CHECK_THROWS_AS(evaluate(inst, partial), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(inst, Assignment(std::vector<Value>{0, 0, 0, 3})),
                    std::invalid_argument);
  }

  TEST_CASE("instance validation") {
    CostMatrix ok(2, 2, 1);
    CHECK_THROWS_AS(Instance({2, 2}, {{0, 0, ok, ok}}), InstanceError);
    CHECK_THROWS_AS(Instance({2, 2}, {{0, 1, ok, ok}, {1, 0, ok, ok}}), InstanceError);
    CostMatrix neg(2, 2, 0);
    neg(1, 1) = -1;
    CHECK_THROWS_AS(Instance({2, 2}, {{0, 1, neg, ok}}), InstanceError);
    CHECK_THROWS_AS(Instance({2, 3}, {{0, 1, ok, ok}}), InstanceError);
    CHECK_THROWS_AS(Instance({2, 0}, {}), InstanceError);
  }

  TEST_CASE("own_cost and side orientation") {
    CostMatrix f01(2, 3), f10(3, 2);
    f01(1, 2) = 7;
    f10(2, 1) = 4;
    const Instance inst({2, 3, 1}, {{1, 0, f10, f01}});
    CHECK(inst.own_cost(0, 1, 1, 2) == 7);
    CHECK(inst.own_cost(1, 0, 2, 1) == 4);
    CHECK(inst.own_cost(0, 2, 1, 0) == 0);
    CHECK(inst.side(1, 0)(2, 1) == 4);
    CHECK(inst.neighbors(0) == std::vector<AgentId>{1});
    CHECK_FALSE(inst.is_connected());
  }

  TEST_CASE("assignment helpers") {
    Assignment a(3);
    CHECK(a.assigned_count() == 0);
    a.set(1, 2);
    Assignment b(3);
    b.set(0, 1);
    a.merge(b);
    CHECK(a.assigned_count() == 2);
    CHECK(a[0] == 1);
    CHECK_FALSE(a.complete());
    a.erase(1);
    CHECK_FALSE(a.contains(1));
  }
}

TEST_SUITE("instance_io") {
  TEST_CASE("write then read gives the same instance") {
    const auto dir = std::filesystem::temp_directory_path() / "ptisabb_io_test";
    std::filesystem::create_directories(dir);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto inst = generate_random_adcop({6, 0.5, 3, 100, seed});
      const auto path = dir / ("inst" + std::to_string(seed) + ".json");
      write_instance(inst, path);
      CHECK(read_instance(path) == inst);
    }
    const auto mixed = Instance({2, 3}, {{0, 1, CostMatrix(2, 3, 4), CostMatrix(3, 2, 1)}});
    CHECK(instance_from_json(instance_to_json(mixed)) == mixed);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("malformed files are rejected") {
    const std::string good =
        R"({"agents":2,"domains":[2,2],"constraints":[{"i":0,"j":1,"fij":[[0,1],[2,3]],"fji":[[0,0],[0,0]]}]})";
    CHECK_NOTHROW(instance_from_json(good));
    CHECK_THROWS_AS(instance_from_json(
                        R"({"agents":2,"domains":[2,2],"constraints":[{"i":0,"j":1,"fij":[[0,-1],[2,3]],"fji":[[0,0],[0,0]]}]})"),
                    InstanceError);
    CHECK_THROWS_AS(
        instance_from_json(
            R"({"agents":2,"domains":[2,2],"constraints":[{"i":0,"j":1,"fij":[[0,1],[2,3]],"fji":[[0,0],[0,0]]},{"i":1,"j":0,"fij":[[0,1],[2,3]],"fji":[[0,0],[0,0]]}]})"),
        InstanceError);
    CHECK_THROWS_AS(instance_from_json(
                        R"({"agents":2,"domains":[2,2],"constraints":[{"i":0,"j":1,"fij":[[0,1]],"fji":[[0,0],[0,0]]}]})"),
                    InstanceError);
    CHECK_THROWS_AS(instance_from_json(
                        R"({"agents":2,"domains":[2,2],"constraints":[{"i":0,"j":1,"fij":[[0,1.5],[2,3]],"fji":[[0,0],[0,0]]}]})"),
                    InstanceError);
    CHECK_THROWS_AS(instance_from_json("{not json"), InstanceError);
    CHECK_THROWS_AS(instance_from_json(R"({"agents":3,"domains":[2,2],"constraints":[]})"),
                    InstanceError);
  }
}
