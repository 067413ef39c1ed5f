#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ptisabb/message.hpp"
#include "ptisabb/model.hpp"
#include "ptisabb/utility_table.hpp"

namespace ptisabb {

/// How much of one private cost entry another agent has learned.
enum class RevealLevel : std::uint8_t { kNone = 0, kFeasibility = 1, kExact = 2 };

/// Per-entry revelation state of every directed constraint side. Levels only
/// escalate.
class RevealLedger {
 public:
  RevealLedger() = default;
  explicit RevealLedger(const Instance& instance);

  RevealLevel level(AgentId owner, AgentId other, Value owner_value, Value other_value) const;

  /// A COST reply disclosed f_owner,other(owner_value, other_value) exactly.
  void record_cost_reply(AgentId owner, AgentId other, Value owner_value, Value other_value);

  /// The parent received a non-locally eliminated UTIL table from `child`.
  /// Every (child value, parent value) pair with a zero entry in the table
  /// shows the parent that the child's side is zero there. Nothing is learned
  /// when the parent dimension was dropped or the child eliminated itself.
  void record_util_shipment(AgentId child, AgentId parent, const UtilityTable& table);

  void escalate(AgentId owner, AgentId other, Value owner_value, Value other_value,
                RevealLevel to);

  /// Weighted revealed fraction of one directed side: exact counts 1,
  /// feasibility 0.5.
  double side_loss(AgentId owner, AgentId other) const;
  /// Weighted revealed fraction over all directed sides.
  double privacy_loss() const;

  std::size_t count(RevealLevel level) const;

 private:
  struct Side {
    AgentId owner = 0;
    AgentId other = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<RevealLevel> levels;
  };
  Side& side(AgentId owner, AgentId other);
  const Side& side(AgentId owner, AgentId other) const;
  static double weight(const Side& s);

  std::size_t agent_count_ = 0;
  std::vector<Side> sides_;
  std::vector<std::int32_t> index_;
};

/// Counters collected over one run.
struct Metrics {
  OpCount nclo = 0;
  std::array<std::uint64_t, kMessageKindCount> messages{};
  std::uint64_t traffic = 0;
  double privacy_loss = 0.0;
  Cost solution_cost = 0;

  std::uint64_t count(MessageKind kind) const {
    return messages[static_cast<std::size_t>(kind)];
  }
  std::uint64_t total_messages() const;
  /// Every message except UTIL.
  std::uint64_t search_messages() const { return total_messages() - count(MessageKind::kUtil); }

  bool operator==(const Metrics&) const = default;
};

}  // namespace ptisabb
