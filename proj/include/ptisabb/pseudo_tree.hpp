#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptisabb/model.hpp"

namespace ptisabb {

class PseudoTreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// DFS arrangement of the constraint graph. Every constraint is either a tree
/// edge (parent/child) or a pseudo edge (pseudo parent/pseudo child).
/// Ancestor sets (pseudo_parents, all_parents, sep) are ordered by depth,
/// shallowest first.
struct PseudoTree {
  AgentId root = 0;
  std::vector<std::optional<AgentId>> parent;
  std::vector<std::vector<AgentId>> pseudo_parents;
  std::vector<std::vector<AgentId>> children;
  std::vector<std::vector<AgentId>> pseudo_children;
  std::vector<std::vector<AgentId>> sep;
  std::vector<int> depth;
  /// DFS preorder; parents always precede their descendants.
  std::vector<AgentId> order;

  std::size_t size() const { return parent.size(); }
  bool is_leaf(AgentId a) const { return children[idx(a)].empty(); }
  bool is_root(AgentId a) const { return a == root; }

  /// Parent plus pseudo parents, shallowest first.
  std::vector<AgentId> all_parents(AgentId a) const;
  /// Every proper descendant of a, in preorder.
  std::vector<AgentId> descendants(AgentId a) const;
  bool is_ancestor(AgentId ancestor, AgentId a) const;
  /// The child of `ancestor` whose subtree contains `descendant`.
  AgentId branch_child(AgentId ancestor, AgentId descendant) const;

  std::size_t tree_edge_count() const;
  std::size_t pseudo_edge_count() const;
  std::size_t max_separator_size() const;

  /// Rank used to order table dimensions canonically: shallower first, then
  /// smaller id.
  std::vector<int> dimension_rank() const;

  std::string to_dot() const;

  static std::size_t idx(AgentId a) { return static_cast<std::size_t>(a); }
};

/// DFS from `root` (default: the max-degree agent, ties by smaller id),
/// visiting neighbours in descending degree, ties by smaller id.
PseudoTree build_pseudo_tree(const Instance& instance, std::optional<AgentId> root = std::nullopt);

/// Sep(a) = (AP(a) ∪ ⋃ Sep(child)) \ {a}, computed bottom-up and depth-ordered.
std::vector<std::vector<AgentId>> separators(const PseudoTree& tree);

}  // namespace ptisabb
