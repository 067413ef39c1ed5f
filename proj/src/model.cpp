#include "ptisabb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

namespace ptisabb {

namespace {

void check_table(const CostMatrix& m, std::size_t rows, std::size_t cols, AgentId owner,
                 AgentId other) {
  const std::string where =
      "constraint side " + std::to_string(owner) + "->" + std::to_string(other);
  if (m.rows() != rows || m.cols() != cols)
    throw InstanceError(where + ": table is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                        std::to_string(cols));
  for (Cost c : m.data()) {
    if (c < 0) throw InstanceError(where + ": negative cost");
    if (c == kInfinity) throw InstanceError(where + ": infinite cost");
  }
}

}  // namespace

Instance::Instance(std::vector<std::size_t> domains, std::vector<Constraint> constraints)
    : domains_(std::move(domains)) {
  const std::size_t n = domains_.size();
  if (n == 0) throw InstanceError("instance needs at least one agent");
  for (std::size_t a = 0; a < n; ++a)
    if (domains_[a] == 0)
      throw InstanceError("agent " + std::to_string(a) + " has an empty domain");

  for (auto& c : constraints) {
    if (c.i > c.j) {
      std::swap(c.i, c.j);
      std::swap(c.fij, c.fji);
    }
    if (c.i < 0 || static_cast<std::size_t>(c.j) >= n)
      throw InstanceError("constraint references unknown agent");
    if (c.i == c.j) throw InstanceError("self-constraint on agent " + std::to_string(c.i));
    check_table(c.fij, domain_size(c.i), domain_size(c.j), c.i, c.j);
    check_table(c.fji, domain_size(c.j), domain_size(c.i), c.j, c.i);
  }
  std::sort(constraints.begin(), constraints.end(),
            [](const Constraint& a, const Constraint& b) {
              return std::pair(a.i, a.j) < std::pair(b.i, b.j);
            });
  for (std::size_t k = 1; k < constraints.size(); ++k)
    if (constraints[k - 1].i == constraints[k].i && constraints[k - 1].j == constraints[k].j)
      throw InstanceError("duplicate constraint between agents " +
                          std::to_string(constraints[k].i) + " and " +
                          std::to_string(constraints[k].j));
  constraints_ = std::move(constraints);

  neighbors_.assign(n, {});
  index_.assign(n * n, -1);
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    const auto& c = constraints_[k];
    neighbors_[static_cast<std::size_t>(c.i)].push_back(c.j);
    neighbors_[static_cast<std::size_t>(c.j)].push_back(c.i);
    index_[static_cast<std::size_t>(c.i) * n + static_cast<std::size_t>(c.j)] =
        static_cast<std::int32_t>(k);
    index_[static_cast<std::size_t>(c.j) * n + static_cast<std::size_t>(c.i)] =
        static_cast<std::int32_t>(k);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

const Constraint* Instance::find(AgentId a, AgentId b) const {
  const std::size_t n = agent_count();
  if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
    return nullptr;
  const auto k = index_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)];
  return k < 0 ? nullptr : &constraints_[static_cast<std::size_t>(k)];
}

Cost Instance::own_cost(AgentId a, AgentId b, Value value_a, Value value_b) const {
  const Constraint* c = find(a, b);
  if (c == nullptr) return 0;
  const auto va = static_cast<std::size_t>(value_a);
  const auto vb = static_cast<std::size_t>(value_b);
  return c->i == a ? c->fij(va, vb) : c->fji(va, vb);
}

const CostMatrix& Instance::side(AgentId owner, AgentId other) const {
  const Constraint* c = find(owner, other);
  if (c == nullptr)
    throw std::out_of_range("agents " + std::to_string(owner) + " and " + std::to_string(other) +
                            " are not constrained");
  return c->i == owner ? c->fij : c->fji;
}

std::size_t Instance::total_side_entries() const {
  std::size_t total = 0;
  for (const auto& c : constraints_) total += c.fij.data().size() + c.fji.data().size();
  return total;
}

bool Instance::is_connected() const {
  const std::size_t n = agent_count();
  std::vector<char> seen(n, 0);
  std::vector<AgentId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const AgentId a = stack.back();
    stack.pop_back();
    for (AgentId b : neighbors(a)) {
      if (!seen[static_cast<std::size_t>(b)]) {
        seen[static_cast<std::size_t>(b)] = 1;
        ++count;
        stack.push_back(b);
      }
    }
  }
  return count == n;
}

std::size_t Assignment::assigned_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](Value v) { return v != kUnassigned; }));
}

void Assignment::merge(const Assignment& other) {
  for (std::size_t a = 0; a < other.values_.size() && a < values_.size(); ++a)
    if (other.values_[a] != kUnassigned) values_[a] = other.values_[a];
}

Cost evaluate(const Instance& instance, const Assignment& assignment) {
  if (assignment.size() != instance.agent_count())
    throw std::invalid_argument("assignment size does not match agent count");
  for (std::size_t a = 0; a < instance.agent_count(); ++a) {
    const auto id = static_cast<AgentId>(a);
    if (!assignment.contains(id))
      throw std::invalid_argument("agent " + std::to_string(a) + " is unassigned");
    if (assignment[id] < 0 || static_cast<std::size_t>(assignment[id]) >= instance.domain_size(id))
      throw std::invalid_argument("agent " + std::to_string(a) + " value out of domain");
  }
  Cost total = 0;
  for (const auto& c : instance.constraints()) {
    const auto vi = static_cast<std::size_t>(assignment[c.i]);
    const auto vj = static_cast<std::size_t>(assignment[c.j]);
    total += c.fij(vi, vj) + c.fji(vj, vi);
  }
  return total;
}

std::size_t edge_count_for(std::size_t agents, double density) {
  const double pairs = static_cast<double>(agents) * static_cast<double>(agents - 1) / 2.0;
  return static_cast<std::size_t>(std::llround(density * pairs));
}

namespace {

using Rng = std::mt19937_64;
using Edge = std::pair<AgentId, AgentId>;

// Uniform spanning tree of K_n (Aldous-Broder walk) plus uniformly sampled
// extra pairs. Returned edges have first < second and are sorted.
std::vector<Edge> random_connected_graph(std::size_t n, double density, Rng& rng) {
  if (n < 2) throw std::invalid_argument("generators need at least 2 agents");
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("density must lie in (0, 1]");
  const std::size_t m = edge_count_for(n, density);
  if (m < n - 1)
    throw std::invalid_argument("density " + std::to_string(density) + " gives " +
                                std::to_string(m) + " constraints for " + std::to_string(n) +
                                " agents; a connected graph needs at least " +
                                std::to_string(n - 1));

  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<Edge> edges;
  std::vector<char> visited(n, 0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t current = pick(rng);
  visited[current] = 1;
  std::size_t seen = 1;
  while (seen < n) {
    std::size_t next = pick(rng);
    if (next == current) continue;
    if (!visited[next]) {
      visited[next] = 1;
      ++seen;
      adj[current][next] = adj[next][current] = 1;
      edges.emplace_back(static_cast<AgentId>(std::min(current, next)),
                         static_cast<AgentId>(std::max(current, next)));
    }
    current = next;
  }

  std::vector<Edge> rest;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!adj[a][b]) rest.emplace_back(static_cast<AgentId>(a), static_cast<AgentId>(b));
  std::shuffle(rest.begin(), rest.end(), rng);
  rest.resize(m - edges.size());
  edges.insert(edges.end(), rest.begin(), rest.end());
  std::sort(edges.begin(), edges.end());
  return edges;
}

template <typename Fill>
Instance build(std::size_t n, std::size_t d, const std::vector<Edge>& edges, Fill&& fill) {
  if (d == 0) throw std::invalid_argument("domain size must be positive");
  std::vector<Constraint> constraints;
  constraints.reserve(edges.size());
  for (const auto& [i, j] : edges) {
    Constraint c{i, j, CostMatrix(d, d), CostMatrix(d, d)};
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t s = 0; s < d; ++s) c.fij(r, s) = fill();
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t s = 0; s < d; ++s) c.fji(r, s) = fill();
    constraints.push_back(std::move(c));
  }
  return Instance(std::vector<std::size_t>(n, d), std::move(constraints));
}

}  // namespace

Instance generate_random_adcop(const RandomAdcopParams& params) {
  if (params.max_cost < 0) throw std::invalid_argument("max_cost must be nonnegative");
  Rng rng(params.seed);
  const auto edges = random_connected_graph(params.agents, params.density, rng);
  std::uniform_int_distribution<Cost> cost(0, params.max_cost);
  return build(params.agents, params.domain_size, edges, [&] { return cost(rng); });
}

Instance generate_max_dcsp(const MaxDcspParams& params) {
  if (!(params.tightness >= 0.0 && params.tightness <= 1.0))
    throw std::invalid_argument("tightness must lie in [0, 1]");
  Rng rng(params.seed);
  const auto edges = random_connected_graph(params.agents, params.density, rng);
  std::bernoulli_distribution prohibited(params.tightness);
  return build(params.agents, params.domain_size, edges,
               [&]() -> Cost { return prohibited(rng) ? 1 : 0; });
}

}  // namespace ptisabb
