#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ptisabb/model.hpp"

namespace ptisabb {

/// Total order on variables used to lay out table dimensions. Tables built
/// from a pseudo tree use PseudoTree::dimension_rank() so the first dimension
/// is always the shallowest ancestor.
class DimensionOrder {
 public:
  DimensionOrder() = default;
  explicit DimensionOrder(std::vector<int> rank) : rank_(std::move(rank)) {}
  /// Orders variables by id.
  static DimensionOrder by_id(std::size_t agent_count);

  int rank(AgentId a) const { return rank_[static_cast<std::size_t>(a)]; }
  bool before(AgentId a, AgentId b) const { return rank(a) < rank(b); }

 private:
  std::vector<int> rank_;
};

/// Dense nonnegative cost table over an ordered list of variables, stored
/// row-major (last dimension fastest). A table with no dimensions is a scalar.
class UtilityTable {
 public:
  UtilityTable() : entries_(1, 0) {}
  UtilityTable(std::vector<AgentId> dims, std::vector<std::size_t> card,
               std::vector<Cost> entries);

  static UtilityTable scalar(Cost value);
  static UtilityTable constant(std::vector<AgentId> dims, std::vector<std::size_t> card,
                               Cost value);
  /// Agent owner's private side toward `other` as a 2-d table.
  static UtilityTable from_side(const Instance& instance, AgentId owner, AgentId other,
                                const DimensionOrder& order);

  const std::vector<AgentId>& dims() const { return dims_; }
  const std::vector<std::size_t>& card() const { return card_; }
  const std::vector<Cost>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t dim_count() const { return dims_.size(); }
  bool has_dim(AgentId var) const;

  /// Entry addressed by one value per dimension, in dim order.
  Cost at(std::span<const Value> index) const;
  /// Entry addressed by the assignment, which must cover every dimension.
  Cost at(const Assignment& assignment) const;

  bool operator==(const UtilityTable&) const = default;

 private:
  std::vector<AgentId> dims_;
  std::vector<std::size_t> card_;
  std::vector<Cost> entries_;
};

/// Sum of two tables over the union of their dimensions. Adds one op to
/// `ops` per result entry.
UtilityTable join(const UtilityTable& a, const UtilityTable& b, const DimensionOrder& order,
                  OpCount* ops = nullptr);

/// Eliminates `var` by taking the minimum over its values.
UtilityTable min_project(const UtilityTable& t, AgentId var, OpCount* ops = nullptr);

/// Restricts the table to the values the assignment gives its dimensions.
/// Assigned variables that are not dimensions of t are ignored.
UtilityTable slice(const UtilityTable& t, const Assignment& assignment, OpCount* ops = nullptr);

inline constexpr std::size_t kNoDimensionLimit = std::numeric_limits<std::size_t>::max();

/// Min-projects the highest-ranked-first (shallowest) dimensions until at most
/// `limit` remain. The result is a pointwise lower bound of t.
UtilityTable drop_to_limit(const UtilityTable& t, std::size_t limit, const DimensionOrder& order,
                           OpCount* ops = nullptr);

}  // namespace ptisabb
