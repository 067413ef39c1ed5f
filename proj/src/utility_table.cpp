#include "ptisabb/utility_table.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ptisabb {

namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& card) {
  std::vector<std::size_t> strides(card.size(), 1);
  for (std::size_t k = card.size(); k-- > 1;) strides[k - 1] = strides[k] * card[k];
  return strides;
}

std::size_t product(const std::vector<std::size_t>& card) {
  return std::accumulate(card.begin(), card.end(), std::size_t{1}, std::multiplies<>());
}

std::ptrdiff_t position(const std::vector<AgentId>& dims, AgentId var) {
  const auto it = std::find(dims.begin(), dims.end(), var);
  return it == dims.end() ? -1 : it - dims.begin();
}

// Row-major odometer over `card`; `step` advances one position and reports
// which digit rolled over last (the lowest digit that incremented).
class Odometer {
 public:
  explicit Odometer(const std::vector<std::size_t>& card) : card_(card), digit_(card.size(), 0) {}
  // Returns the index of the digit that was incremented, or -1 when done.
  std::ptrdiff_t step() {
    for (std::size_t k = card_.size(); k-- > 0;) {
      if (++digit_[k] < card_[k]) return static_cast<std::ptrdiff_t>(k);
      digit_[k] = 0;
    }
    return -1;
  }
  std::size_t digit(std::size_t k) const { return digit_[k]; }

 private:
  const std::vector<std::size_t>& card_;
  std::vector<std::size_t> digit_;
};

// Offset bookkeeping for walking a source table while iterating a target
// odometer: src_stride[k] is the source stride for target dim k (0 if absent).
struct Walker {
  std::vector<std::size_t> src_stride;
  std::vector<std::size_t> card;
  std::size_t offset = 0;

  void advance(std::ptrdiff_t rolled_to) {
    // digits below rolled_to wrapped to zero, rolled_to incremented by one
    const auto r = static_cast<std::size_t>(rolled_to);
    for (std::size_t k = r + 1; k < card.size(); ++k) offset -= (card[k] - 1) * src_stride[k];
    offset += src_stride[r];
  }
};

}  // namespace

DimensionOrder DimensionOrder::by_id(std::size_t agent_count) {
  std::vector<int> rank(agent_count);
  std::iota(rank.begin(), rank.end(), 0);
  return DimensionOrder(std::move(rank));
}

UtilityTable::UtilityTable(std::vector<AgentId> dims, std::vector<std::size_t> card,
                           std::vector<Cost> entries)
    : dims_(std::move(dims)), card_(std::move(card)), entries_(std::move(entries)) {
  if (dims_.size() != card_.size())
    throw std::invalid_argument("utility table: dims and cardinalities differ in length");
  auto sorted = dims_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("utility table: repeated dimension");
  if (std::find(card_.begin(), card_.end(), 0) != card_.end())
    throw std::invalid_argument("utility table: zero cardinality");
  if (entries_.size() != product(card_))
    throw std::invalid_argument("utility table: entry count does not match cardinalities");
  if (std::any_of(entries_.begin(), entries_.end(), [](Cost c) { return c < 0; }))
    throw std::invalid_argument("utility table: negative entry");
}

UtilityTable UtilityTable::scalar(Cost value) { return UtilityTable({}, {}, {value}); }

UtilityTable UtilityTable::constant(std::vector<AgentId> dims, std::vector<std::size_t> card,
                                    Cost value) {
  const std::size_t n = product(card);
  return UtilityTable(std::move(dims), std::move(card), std::vector<Cost>(n, value));
}

UtilityTable UtilityTable::from_side(const Instance& instance, AgentId owner, AgentId other,
                                     const DimensionOrder& order) {
  const CostMatrix& m = instance.side(owner, other);
  if (order.before(owner, other))
    return UtilityTable({owner, other}, {m.rows(), m.cols()},
                        std::vector<Cost>(m.data().begin(), m.data().end()));
  std::vector<Cost> entries(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) entries[c * m.rows() + r] = m(r, c);
  return UtilityTable({other, owner}, {m.cols(), m.rows()}, std::move(entries));
}

bool UtilityTable::has_dim(AgentId var) const { return position(dims_, var) >= 0; }

Cost UtilityTable::at(std::span<const Value> index) const {
  if (index.size() != dims_.size())
    throw std::invalid_argument("utility table: index arity mismatch");
  std::size_t offset = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (index[k] < 0 || static_cast<std::size_t>(index[k]) >= card_[k])
      throw std::out_of_range("utility table: value out of domain");
    offset = offset * card_[k] + static_cast<std::size_t>(index[k]);
  }
  return entries_[offset];
}

Cost UtilityTable::at(const Assignment& assignment) const {
  std::vector<Value> index(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (!assignment.contains(dims_[k]))
      throw std::invalid_argument("utility table: dimension " + std::to_string(dims_[k]) +
                                  " unassigned");
    index[k] = assignment[dims_[k]];
  }
  return at(index);
}

UtilityTable join(const UtilityTable& a, const UtilityTable& b, const DimensionOrder& order,
                  OpCount* ops) {
  std::vector<AgentId> dims = a.dims();
  for (AgentId v : b.dims()) {
    const auto pa = position(a.dims(), v);
    if (pa < 0) {
      dims.push_back(v);
    } else if (a.card()[static_cast<std::size_t>(pa)] !=
               b.card()[static_cast<std::size_t>(position(b.dims(), v))]) {
      throw std::invalid_argument("join: cardinality mismatch on variable " + std::to_string(v));
    }
  }
  std::sort(dims.begin(), dims.end(), [&](AgentId x, AgentId y) { return order.before(x, y); });

  std::vector<std::size_t> card(dims.size());
  Walker wa, wb;
  const auto sa = strides_of(a.card());
  const auto sb = strides_of(b.card());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const auto pa = position(a.dims(), dims[k]);
    const auto pb = position(b.dims(), dims[k]);
    card[k] = pa >= 0 ? a.card()[static_cast<std::size_t>(pa)]
                      : b.card()[static_cast<std::size_t>(pb)];
    wa.src_stride.push_back(pa >= 0 ? sa[static_cast<std::size_t>(pa)] : 0);
    wb.src_stride.push_back(pb >= 0 ? sb[static_cast<std::size_t>(pb)] : 0);
  }
  wa.card = wb.card = card;

  std::vector<Cost> entries(product(card));
  Odometer odo(card);
  for (std::size_t r = 0; r < entries.size(); ++r) {
    entries[r] = add_cost(a.entries()[wa.offset], b.entries()[wb.offset]);
    const auto rolled = odo.step();
    if (rolled >= 0) {
      wa.advance(rolled);
      wb.advance(rolled);
    }
  }
  if (ops) *ops += entries.size();
  return UtilityTable(std::move(dims), std::move(card), std::move(entries));
}

UtilityTable min_project(const UtilityTable& t, AgentId var, OpCount* ops) {
  const auto p = position(t.dims(), var);
  if (p < 0) throw std::invalid_argument("min_project: variable " + std::to_string(var) +
                                         " is not a dimension");
  std::vector<AgentId> dims = t.dims();
  std::vector<std::size_t> card = t.card();
  dims.erase(dims.begin() + p);
  card.erase(card.begin() + p);

  // walk the source table in order, tracking the destination offset
  Walker dest;
  const auto rs = strides_of(card);
  for (std::size_t k = 0, r = 0; k < t.dims().size(); ++k)
    dest.src_stride.push_back(static_cast<std::ptrdiff_t>(k) == p ? 0 : rs[r++]);
  dest.card = t.card();

  std::vector<Cost> entries(product(card), kInfinity);
  Odometer odo(t.card());
  for (std::size_t s = 0; s < t.size(); ++s) {
    entries[dest.offset] = std::min(entries[dest.offset], t.entries()[s]);
    const auto rolled = odo.step();
    if (rolled >= 0) dest.advance(rolled);
  }
  if (ops) *ops += entries.size();
  return UtilityTable(std::move(dims), std::move(card), std::move(entries));
}

UtilityTable slice(const UtilityTable& t, const Assignment& assignment, OpCount* ops) {
  const auto st = strides_of(t.card());
  std::vector<AgentId> dims;
  std::vector<std::size_t> card;
  Walker src;
  std::size_t base = 0;
  for (std::size_t k = 0; k < t.dims().size(); ++k) {
    const AgentId v = t.dims()[k];
    if (static_cast<std::size_t>(v) < assignment.size() && assignment.contains(v)) {
      const Value val = assignment[v];
      if (val < 0 || static_cast<std::size_t>(val) >= t.card()[k])
        throw std::out_of_range("slice: value " + std::to_string(val) + " out of domain for " +
                                std::to_string(v));
      base += static_cast<std::size_t>(val) * st[k];
    } else {
      dims.push_back(v);
      card.push_back(t.card()[k]);
      src.src_stride.push_back(st[k]);
    }
  }
  src.card = card;
  src.offset = base;

  std::vector<Cost> entries(product(card));
  Odometer odo(card);
  for (std::size_t r = 0; r < entries.size(); ++r) {
    entries[r] = t.entries()[src.offset];
    const auto rolled = odo.step();
    if (rolled >= 0) src.advance(rolled);
  }
  if (ops) *ops += entries.size();
  return UtilityTable(std::move(dims), std::move(card), std::move(entries));
}

UtilityTable drop_to_limit(const UtilityTable& t, std::size_t limit, const DimensionOrder& order,
                           OpCount* ops) {
  if (limit == 0) throw std::invalid_argument("drop_to_limit: limit must be at least 1");
  UtilityTable out = t;
  while (out.dim_count() > limit) {
    const auto& dims = out.dims();
    const AgentId highest = *std::min_element(
        dims.begin(), dims.end(), [&](AgentId x, AgentId y) { return order.before(x, y); });
    out = min_project(out, highest, ops);
  }
  return out;
}

}  // namespace ptisabb
