#include "ptisabb/pseudo_tree.hpp"

#include <algorithm>
#include <sstream>

namespace ptisabb {

namespace {

void sort_by_depth(std::vector<AgentId>& ids, const std::vector<int>& depth) {
  std::sort(ids.begin(), ids.end(), [&](AgentId a, AgentId b) {
    const int da = depth[static_cast<std::size_t>(a)];
    const int db = depth[static_cast<std::size_t>(b)];
    return da != db ? da < db : a < b;
  });
}

}  // namespace

std::vector<AgentId> PseudoTree::all_parents(AgentId a) const {
  std::vector<AgentId> out = pseudo_parents[idx(a)];
  if (parent[idx(a)]) out.push_back(*parent[idx(a)]);
  sort_by_depth(out, depth);
  return out;
}

std::vector<AgentId> PseudoTree::descendants(AgentId a) const {
  std::vector<AgentId> out;
  std::vector<AgentId> stack(children[idx(a)].rbegin(), children[idx(a)].rend());
  while (!stack.empty()) {
    const AgentId x = stack.back();
    stack.pop_back();
    out.push_back(x);
    stack.insert(stack.end(), children[idx(x)].rbegin(), children[idx(x)].rend());
  }
  return out;
}

bool PseudoTree::is_ancestor(AgentId ancestor, AgentId a) const {
  auto p = parent[idx(a)];
  while (p) {
    if (*p == ancestor) return true;
    p = parent[idx(*p)];
  }
  return false;
}

AgentId PseudoTree::branch_child(AgentId ancestor, AgentId descendant) const {
  AgentId x = descendant;
  while (parent[idx(x)] && *parent[idx(x)] != ancestor) x = *parent[idx(x)];
  if (!parent[idx(x)])
    throw std::invalid_argument(std::to_string(descendant) + " is not below " +
                                std::to_string(ancestor));
  return x;
}

std::size_t PseudoTree::tree_edge_count() const {
  std::size_t count = 0;
  for (const auto& c : children) count += c.size();
  return count;
}

std::size_t PseudoTree::pseudo_edge_count() const {
  std::size_t count = 0;
  for (const auto& pp : pseudo_parents) count += pp.size();
  return count;
}

std::size_t PseudoTree::max_separator_size() const {
  std::size_t w = 0;
  for (const auto& s : sep) w = std::max(w, s.size());
  return w;
}

std::vector<int> PseudoTree::dimension_rank() const {
  std::vector<AgentId> ids(size());
  for (std::size_t a = 0; a < ids.size(); ++a) ids[a] = static_cast<AgentId>(a);
  sort_by_depth(ids, depth);
  std::vector<int> rank(size());
  for (std::size_t r = 0; r < ids.size(); ++r) rank[idx(ids[r])] = static_cast<int>(r);
  return rank;
}

std::string PseudoTree::to_dot() const {
  std::ostringstream out;
  out << "digraph pseudo_tree {\n";
  for (AgentId a : order) out << "  a" << a << " [label=\"a" << a << "\"];\n";
  for (AgentId a : order)
    for (AgentId c : children[idx(a)]) out << "  a" << a << " -> a" << c << ";\n";
  for (AgentId a : order)
    for (AgentId pc : pseudo_children[idx(a)])
      out << "  a" << a << " -> a" << pc << " [style=dashed];\n";
  out << "}\n";
  return out.str();
}

PseudoTree build_pseudo_tree(const Instance& instance, std::optional<AgentId> root) {
  const std::size_t n = instance.agent_count();
  auto degree = [&](AgentId a) { return instance.neighbors(a).size(); };
  auto by_degree = [&](AgentId a, AgentId b) {
    return degree(a) != degree(b) ? degree(a) > degree(b) : a < b;
  };

  AgentId start = 0;
  if (root) {
    if (*root < 0 || static_cast<std::size_t>(*root) >= n)
      throw PseudoTreeError("root " + std::to_string(*root) + " is not an agent");
    start = *root;
  } else {
    for (std::size_t a = 1; a < n; ++a)
      if (by_degree(static_cast<AgentId>(a), start)) start = static_cast<AgentId>(a);
  }

  PseudoTree tree;
  tree.root = start;
  tree.parent.assign(n, std::nullopt);
  tree.pseudo_parents.assign(n, {});
  tree.children.assign(n, {});
  tree.pseudo_children.assign(n, {});
  tree.depth.assign(n, -1);

  std::vector<std::vector<AgentId>> visit_order(n);
  for (std::size_t a = 0; a < n; ++a) {
    visit_order[a] = instance.neighbors(static_cast<AgentId>(a));
    std::sort(visit_order[a].begin(), visit_order[a].end(), by_degree);
  }

  // (agent, next neighbour position); on_stack marks the current root path
  std::vector<std::pair<AgentId, std::size_t>> stack{{start, 0}};
  std::vector<char> on_stack(n, 0);
  tree.depth[PseudoTree::idx(start)] = 0;
  on_stack[PseudoTree::idx(start)] = 1;
  tree.order.push_back(start);
  while (!stack.empty()) {
    auto& [a, pos] = stack.back();
    const auto& nbrs = visit_order[PseudoTree::idx(a)];
    if (pos == nbrs.size()) {
      on_stack[PseudoTree::idx(a)] = 0;
      stack.pop_back();
      continue;
    }
    const AgentId b = nbrs[pos++];
    const auto bi = PseudoTree::idx(b);
    if (tree.depth[bi] < 0) {
      tree.parent[bi] = a;
      tree.children[PseudoTree::idx(a)].push_back(b);
      tree.depth[bi] = tree.depth[PseudoTree::idx(a)] + 1;
      tree.order.push_back(b);
      on_stack[bi] = 1;
      stack.emplace_back(b, 0);
    } else if (on_stack[bi] && tree.parent[PseudoTree::idx(a)] != b) {
      // back edge to a proper ancestor other than the parent
      tree.pseudo_parents[PseudoTree::idx(a)].push_back(b);
      tree.pseudo_children[bi].push_back(a);
    }
  }
  if (tree.order.size() != n) throw PseudoTreeError("constraint graph is disconnected");

  for (std::size_t a = 0; a < n; ++a) {
    sort_by_depth(tree.pseudo_parents[a], tree.depth);
    std::sort(tree.pseudo_children[a].begin(), tree.pseudo_children[a].end());
  }
  tree.sep = separators(tree);
  return tree;
}

std::vector<std::vector<AgentId>> separators(const PseudoTree& tree) {
  const std::size_t n = tree.size();
  std::vector<std::vector<AgentId>> sep(n);
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    const AgentId a = *it;
    std::vector<AgentId> s = tree.all_parents(a);
    for (AgentId c : tree.children[PseudoTree::idx(a)]) {
      const auto& cs = sep[PseudoTree::idx(c)];
      s.insert(s.end(), cs.begin(), cs.end());
    }
    std::erase(s, a);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    sort_by_depth(s, tree.depth);
    sep[PseudoTree::idx(a)] = std::move(s);
  }
  return sep;
}

}  // namespace ptisabb
