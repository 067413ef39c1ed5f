#include "ptisabb/simulator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <random>
#include <string>

namespace ptisabb {

void AgentContext::send(Message msg) {
  msg.sender = self_;
  msg.stamp = clock_;
  outbox_.push_back(std::move(msg));
}

namespace {

struct Pending {
  std::uint64_t step = 0;
  std::uint64_t seq = 0;
  Message msg;
};

// Oldest send step first, then (sender, receiver), then FIFO.
struct Later {
  bool operator()(const Pending& a, const Pending& b) const {
    if (a.step != b.step) return a.step > b.step;
    if (a.msg.sender != b.msg.sender) return a.msg.sender > b.msg.sender;
    if (a.msg.receiver != b.msg.receiver) return a.msg.receiver > b.msg.receiver;
    return a.seq > b.seq;
  }
};

class Queues {
 public:
  explicit Queues(const SchedulePolicy& policy) : policy_(policy), rng_(policy.seed) {}

  void push(Pending p) {
    if (policy_.kind == SchedulePolicy::Kind::kOldestFirst) {
      heap_.push(std::move(p));
      return;
    }
    const auto key = std::pair(p.msg.sender, p.msg.receiver);
    auto& q = edges_[key];
    if (q.empty()) active_.push_back(key);
    q.push_back(std::move(p));
  }

  bool empty() const {
    return policy_.kind == SchedulePolicy::Kind::kOldestFirst ? heap_.empty() : active_.empty();
  }

  Pending pop() {
    if (policy_.kind == SchedulePolicy::Kind::kOldestFirst) {
      Pending p = heap_.top();
      heap_.pop();
      return p;
    }
    std::uniform_int_distribution<std::size_t> pick(0, active_.size() - 1);
    const std::size_t slot = pick(rng_);
    const auto key = active_[slot];
    auto& q = edges_[key];
    Pending p = std::move(q.front());
    q.pop_front();
    if (q.empty()) {
      active_[slot] = active_.back();
      active_.pop_back();
    }
    return p;
  }

 private:
  SchedulePolicy policy_;
  std::mt19937_64 rng_;
  std::priority_queue<Pending, std::vector<Pending>, Later> heap_;
  std::map<std::pair<AgentId, AgentId>, std::deque<Pending>> edges_;
  std::vector<std::pair<AgentId, AgentId>> active_;
};

}  // namespace

SimulationResult run_simulation(std::vector<std::unique_ptr<Agent>>& agents,
                                std::vector<Message> initial_messages,
                                const SimulationOptions& options, RevealLedger* ledger) {
  const std::size_t n = agents.size();
  for (std::size_t a = 0; a < n; ++a)
    if (!agents[a] || agents[a]->id() != static_cast<AgentId>(a))
      throw std::invalid_argument("agents must be registered densely by id");

  SimulationResult result;
  result.clocks = options.initial_clocks.empty() ? std::vector<OpCount>(n, 0)
                                                 : options.initial_clocks;
  if (result.clocks.size() != n) throw std::invalid_argument("initial clocks size mismatch");

  Queues queues(options.policy);
  std::uint64_t seq = 0;
  std::vector<Message> outbox;

  auto flush = [&](std::uint64_t step) {
    for (auto& m : outbox) {
      if (m.receiver < 0 || static_cast<std::size_t>(m.receiver) >= n)
        throw std::logic_error("message to unknown agent " + std::to_string(m.receiver));
      ++result.metrics.messages[static_cast<std::size_t>(m.kind)];
      result.metrics.traffic += m.size();
      queues.push(Pending{step, seq++, std::move(m)});
    }
    outbox.clear();
  };

  outbox = std::move(initial_messages);
  flush(0);
  for (std::size_t a = 0; a < n; ++a) {
    AgentContext ctx(static_cast<AgentId>(a), result.clocks[a], outbox, ledger);
    agents[a]->start(ctx);
  }
  flush(0);

  std::uint64_t step = 0;
  while (!queues.empty()) {
    ++step;
    if (options.deadline && (step & 1023) == 0 &&
        std::chrono::steady_clock::now() > *options.deadline)
      throw TimeoutError("simulation exceeded its deadline after " + std::to_string(step) +
                         " deliveries");
    Pending p = queues.pop();
    const auto r = static_cast<std::size_t>(p.msg.receiver);
    result.clocks[r] = std::max(result.clocks[r], p.msg.stamp);
    if (options.observer) options.observer(p.msg);
    AgentContext ctx(p.msg.receiver, result.clocks[r], outbox, ledger);
    agents[r]->receive(p.msg, ctx);
    flush(step);
  }

  for (const auto& agent : agents)
    if (!agent->terminated())
      throw DeadlockError("message queues drained but agent " + std::to_string(agent->id()) +
                          " has not terminated");

  result.metrics.nclo =
      result.clocks.empty() ? 0 : *std::max_element(result.clocks.begin(), result.clocks.end());
  if (ledger) result.metrics.privacy_loss = ledger->privacy_loss();
  return result;
}

}  // namespace ptisabb
