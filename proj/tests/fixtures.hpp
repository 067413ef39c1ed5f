#pragma once

#include <random>
#include <utility>
#include <vector>

#include "ptisabb/model.hpp"

namespace fixtures {

using ptisabb::AgentId;
using ptisabb::Constraint;
using ptisabb::Cost;
using ptisabb::CostMatrix;
using ptisabb::Instance;

using Edge = std::pair<AgentId, AgentId>;

inline CostMatrix random_matrix(std::size_t rows, std::size_t cols, Cost max_cost,
                                std::mt19937& rng) {
  std::uniform_int_distribution<Cost> dist(0, max_cost);
  CostMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = dist(rng);
  return m;
}

/// Instance over the given edges with uniform domain d and random tables.
/// max_cost = 0 gives an all-zero instance.
inline Instance make_instance(std::size_t n, std::size_t d, const std::vector<Edge>& edges,
                              unsigned seed, Cost max_cost = 9) {
  std::mt19937 rng(seed);
  std::vector<Constraint> cs;
  for (auto [i, j] : edges)
    cs.push_back({i, j, random_matrix(d, d, max_cost, rng), random_matrix(d, d, max_cost, rng)});
  return Instance(std::vector<std::size_t>(n, d), std::move(cs));
}

/// Four agents a1..a4 (ids 0..3) with edges a1-a2, a1-a3, a2-a3, a2-a4.
inline const std::vector<Edge> kFourAgentEdges{{0, 1}, {0, 2}, {1, 2}, {1, 3}};

inline Instance four_agent(std::size_t d = 3, unsigned seed = 1, Cost max_cost = 9) {
  return make_instance(4, d, kFourAgentEdges, seed, max_cost);
}

inline std::vector<Edge> chain_edges(std::size_t n) {
  std::vector<Edge> out;
  for (std::size_t a = 0; a + 1 < n; ++a)
    out.emplace_back(static_cast<AgentId>(a), static_cast<AgentId>(a + 1));
  return out;
}

inline std::vector<Edge> complete_edges(std::size_t n) {
  std::vector<Edge> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      out.emplace_back(static_cast<AgentId>(a), static_cast<AgentId>(b));
  return out;
}

}  // namespace fixtures
