#include "ptisabb/metrics.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace ptisabb {

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::kUtil: return "UTIL";
    case MessageKind::kCpa: return "CPA";
    case MessageKind::kCostReq: return "COST_REQ";
    case MessageKind::kCost: return "COST";
    case MessageKind::kBacktrack: return "BACKTRACK";
    case MessageKind::kTerminate: return "TERMINATE";
    case MessageKind::kSolution: return "SOLUTION";
  }
  return "?";
}

std::size_t Message::size() const {
  switch (kind) {
    case MessageKind::kUtil: return table ? table->size() : 0;
    case MessageKind::kCpa:
    case MessageKind::kSolution: return assignment.size() + 1;
    case MessageKind::kCostReq:
    case MessageKind::kCost: return 2;
    case MessageKind::kBacktrack: return 3 + assignment.assigned_count();
    case MessageKind::kTerminate: return 1;
  }
  return 0;
}

std::uint64_t Metrics::total_messages() const {
  return std::accumulate(messages.begin(), messages.end(), std::uint64_t{0});
}

RevealLedger::RevealLedger(const Instance& instance)
    : agent_count_(instance.agent_count()), index_(agent_count_ * agent_count_, -1) {
  for (const auto& c : instance.constraints()) {
    index_[static_cast<std::size_t>(c.i) * agent_count_ + static_cast<std::size_t>(c.j)] =
        static_cast<std::int32_t>(sides_.size());
    sides_.push_back(Side{c.i, c.j, c.fij.rows(), c.fij.cols(),
                          std::vector<RevealLevel>(c.fij.data().size(), RevealLevel::kNone)});
    index_[static_cast<std::size_t>(c.j) * agent_count_ + static_cast<std::size_t>(c.i)] =
        static_cast<std::int32_t>(sides_.size());
    sides_.push_back(Side{c.j, c.i, c.fji.rows(), c.fji.cols(),
                          std::vector<RevealLevel>(c.fji.data().size(), RevealLevel::kNone)});
  }
}

RevealLedger::Side& RevealLedger::side(AgentId owner, AgentId other) {
  return const_cast<Side&>(static_cast<const RevealLedger&>(*this).side(owner, other));
}

const RevealLedger::Side& RevealLedger::side(AgentId owner, AgentId other) const {
  const auto k = index_.at(static_cast<std::size_t>(owner) * agent_count_ +
                           static_cast<std::size_t>(other));
  if (k < 0)
    throw std::out_of_range("no constraint side " + std::to_string(owner) + "->" +
                            std::to_string(other));
  return sides_[static_cast<std::size_t>(k)];
}

RevealLevel RevealLedger::level(AgentId owner, AgentId other, Value owner_value,
                                Value other_value) const {
  const Side& s = side(owner, other);
  return s.levels.at(static_cast<std::size_t>(owner_value) * s.cols +
                     static_cast<std::size_t>(other_value));
}

void RevealLedger::escalate(AgentId owner, AgentId other, Value owner_value, Value other_value,
                            RevealLevel to) {
  Side& s = side(owner, other);
  auto& cell = s.levels.at(static_cast<std::size_t>(owner_value) * s.cols +
                           static_cast<std::size_t>(other_value));
  if (to > cell) cell = to;
}

void RevealLedger::record_cost_reply(AgentId owner, AgentId other, Value owner_value,
                                     Value other_value) {
  escalate(owner, other, owner_value, other_value, RevealLevel::kExact);
}

void RevealLedger::record_util_shipment(AgentId child, AgentId parent, const UtilityTable& table) {
  if (!table.has_dim(child) || !table.has_dim(parent)) return;
  const Side& s = side(child, parent);
  // minimum over every other dimension, leaving (child, parent) pairs
  UtilityTable pairs = table;
  for (AgentId v : table.dims())
    if (v != child && v != parent) pairs = min_project(pairs, v);
  const bool child_first = pairs.dims().front() == child;
  for (std::size_t dc = 0; dc < s.rows; ++dc) {
    for (std::size_t dp = 0; dp < s.cols; ++dp) {
      const std::size_t offset = child_first ? dc * s.cols + dp : dp * s.rows + dc;
      if (pairs.entries()[offset] == 0)
        escalate(child, parent, static_cast<Value>(dc), static_cast<Value>(dp),
                 RevealLevel::kFeasibility);
    }
  }
}

double RevealLedger::weight(const Side& s) {
  double w = 0.0;
  for (RevealLevel l : s.levels) {
    if (l == RevealLevel::kExact) w += 1.0;
    else if (l == RevealLevel::kFeasibility) w += 0.5;
  }
  return w;
}

double RevealLedger::side_loss(AgentId owner, AgentId other) const {
  const Side& s = side(owner, other);
  return s.levels.empty() ? 0.0 : weight(s) / static_cast<double>(s.levels.size());
}

double RevealLedger::privacy_loss() const {
  double w = 0.0;
  std::size_t total = 0;
  for (const auto& s : sides_) {
    w += weight(s);
    total += s.levels.size();
  }
  return total == 0 ? 0.0 : w / static_cast<double>(total);
}

std::size_t RevealLedger::count(RevealLevel level) const {
  std::size_t n = 0;
  for (const auto& s : sides_)
    for (RevealLevel l : s.levels) n += l == level ? 1 : 0;
  return n;
}

}  // namespace ptisabb
