#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptisabb/cost.hpp"

namespace ptisabb {

/// Dense rows x cols table of private costs, row-major.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, Cost fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Cost operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Cost& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const Cost> data() const { return data_; }

  bool operator==(const CostMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Cost> data_;
};

/// A binary asymmetric constraint between agents i < j. fij is i's private
/// side indexed (d_i, d_j); fji is j's private side indexed (d_j, d_i).
struct Constraint {
  AgentId i = 0;
  AgentId j = 0;
  CostMatrix fij;
  CostMatrix fji;

  bool operator==(const Constraint&) const = default;
};

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Asymmetric DCOP with one variable per agent and binary constraints.
/// Immutable once constructed.
class Instance {
 public:
  Instance() = default;

  /// Validates domains, pair uniqueness, table shapes and nonnegativity.
  /// Constraints are stored with i < j, sorted by (i, j); a constraint given
  /// as (j, i) is flipped.
  Instance(std::vector<std::size_t> domains, std::vector<Constraint> constraints);

  std::size_t agent_count() const { return domains_.size(); }
  std::size_t domain_size(AgentId a) const { return domains_[static_cast<std::size_t>(a)]; }
  const std::vector<std::size_t>& domains() const { return domains_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Sorted neighbour ids of agent a.
  const std::vector<AgentId>& neighbors(AgentId a) const {
    return neighbors_[static_cast<std::size_t>(a)];
  }
  bool constrained(AgentId a, AgentId b) const { return find(a, b) != nullptr; }

  /// Agent a's private cost f_ab(value_a, value_b). Zero when a and b share
  /// no constraint.
  Cost own_cost(AgentId a, AgentId b, Value value_a, Value value_b) const;

  /// The private table of `owner` toward `other`, indexed (owner value, other value).
  /// Throws if the agents are unconstrained.
  const CostMatrix& side(AgentId owner, AgentId other) const;

  std::size_t total_side_entries() const;
  bool is_connected() const;

  bool operator==(const Instance& other) const {
    return domains_ == other.domains_ && constraints_ == other.constraints_;
  }

 private:
  const Constraint* find(AgentId a, AgentId b) const;

  std::vector<std::size_t> domains_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<AgentId>> neighbors_;
  // constraint index per (a, b), dense n*n, -1 if none
  std::vector<std::int32_t> index_;
};

/// Partial or complete assignment of values to agents. Unassigned slots are
/// kUnassigned.
class Assignment {
 public:
  static constexpr Value kUnassigned = -1;

  Assignment() = default;
  explicit Assignment(std::size_t agent_count) : values_(agent_count, kUnassigned) {}
  explicit Assignment(std::vector<Value> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool contains(AgentId a) const { return values_[static_cast<std::size_t>(a)] != kUnassigned; }
  Value operator[](AgentId a) const { return values_[static_cast<std::size_t>(a)]; }
  void set(AgentId a, Value v) { values_[static_cast<std::size_t>(a)] = v; }
  void erase(AgentId a) { values_[static_cast<std::size_t>(a)] = kUnassigned; }
  std::size_t assigned_count() const;
  bool complete() const { return assigned_count() == values_.size(); }
  const std::vector<Value>& values() const { return values_; }

  /// Copies every assigned slot of `other` into this assignment.
  void merge(const Assignment& other);

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<Value> values_;
};

/// Total two-sided cost of a complete in-domain assignment.
Cost evaluate(const Instance& instance, const Assignment& assignment);

struct RandomAdcopParams {
  std::size_t agents = 8;
  double density = 0.25;
  std::size_t domain_size = 3;
  Cost max_cost = 100;
  std::uint64_t seed = 0;
};

struct MaxDcspParams {
  std::size_t agents = 10;
  double density = 0.4;
  std::size_t domain_size = 10;
  double tightness = 0.1;
  std::uint64_t seed = 0;
};

/// Number of constraints the generators produce for (n, density).
std::size_t edge_count_for(std::size_t agents, double density);

/// Random connected ADCOP with i.i.d. uniform integer costs in [0, max_cost].
Instance generate_random_adcop(const RandomAdcopParams& params);

/// Asymmetric MaxDCSP: each directed entry is prohibited (cost 1) with
/// probability `tightness`, otherwise 0.
Instance generate_max_dcsp(const MaxDcspParams& params);

}  // namespace ptisabb
