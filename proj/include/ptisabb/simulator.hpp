#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ptisabb/message.hpp"
#include "ptisabb/metrics.hpp"

namespace ptisabb {

class DeadlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Handle an agent uses while reacting to a message: charge logical
/// operations to its clock, send messages, report revelations.
class AgentContext {
 public:
  AgentContext(AgentId self, OpCount& clock, std::vector<Message>& outbox, RevealLedger* ledger)
      : self_(self), clock_(clock), outbox_(outbox), ledger_(ledger) {}

  AgentId self() const { return self_; }
  void charge(OpCount ops) { clock_ += ops; }
  OpCount clock() const { return clock_; }
  OpCount* clock_ptr() { return &clock_; }
  /// Queues `msg` from this agent, stamped with the current clock.
  void send(Message msg);
  RevealLedger* ledger() { return ledger_; }

 private:
  AgentId self_;
  OpCount& clock_;
  std::vector<Message>& outbox_;
  RevealLedger* ledger_;
};

/// A single-threaded state machine driven by the simulator.
class Agent {
 public:
  explicit Agent(AgentId id) : id_(id) {}
  virtual ~Agent() = default;
  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  AgentId id() const { return id_; }
  /// Called once, in id order, before any message is delivered.
  virtual void start(AgentContext& ctx) { (void)ctx; }
  virtual void receive(const Message& msg, AgentContext& ctx) = 0;
  virtual bool terminated() const = 0;

 private:
  AgentId id_;
};

struct SchedulePolicy {
  enum class Kind {
    /// Oldest send step first, ties by (sender, receiver), FIFO per edge.
    kOldestFirst,
    /// Uniformly random non-empty edge queue; FIFO per edge.
    kRandomEdge,
  };
  Kind kind = Kind::kOldestFirst;
  std::uint64_t seed = 0;
};

struct SimulationOptions {
  SchedulePolicy policy;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Called for every message right before delivery.
  std::function<void(const Message&)> observer;
  /// Initial clock per agent (empty means all zero).
  std::vector<OpCount> initial_clocks;
};

struct SimulationResult {
  Metrics metrics;
  std::vector<OpCount> clocks;
};

/// Runs agents to quiescence. Receivers take max(own clock, message stamp)
/// before processing. Throws DeadlockError when queues drain while some agent
/// has not terminated, TimeoutError past the deadline.
SimulationResult run_simulation(std::vector<std::unique_ptr<Agent>>& agents,
                                std::vector<Message> initial_messages,
                                const SimulationOptions& options = {},
                                RevealLedger* ledger = nullptr);

}  // namespace ptisabb
