// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBMR_CLUSTER_HPP_
#define SUBMR_CLUSTER_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submr/oracle.hpp"
#include "submr/rng.hpp"

namespace submr {

enum class Enforcement { kOff, kWarn, kFail };

inline const char* to_string(Enforcement e) {
  switch (e) {
    case Enforcement::kOff: return "off";
    case Enforcement::kWarn: return "warn";
    case Enforcement::kFail: return "fail";
  }
  return "?";
}

/// Cluster geometry and budgets. Defaults follow the square-root
/// regime: m = ceil(sqrt(n/k)) worker machines, sampling probability
/// p = min(1, 4 sqrt(k/n)), per-machine capacity c1 * ceil(sqrt(nk))
/// and central capacity c2 * ceil(sqrt(nk) * log2(k+1)), in element
/// units.
struct ClusterConfig {
  std::uint32_t n = 0;
  std::uint32_t k = 1;
  std::uint32_t machines = 1;
  double sample_prob = 1.0;
  std::uint64_t budget_regular = 0;
  std::uint64_t budget_central = 0;
  std::uint64_t seed = 0;
  Enforcement enforcement = Enforcement::kWarn;

  static ClusterConfig with_defaults(std::uint32_t n, std::uint32_t k,
                                     std::uint64_t seed, double c1 = 8.0,
                                     double c2 = 8.0) {
    if (n == 0 || k == 0) {
      throw std::invalid_argument("cluster config: n and k must be positive");
    }
    ClusterConfig cfg;
    cfg.n = n;
    cfg.k = k;
    cfg.seed = seed;
    double nd = n, kd = k;
    cfg.machines =
        std::max<std::uint32_t>(1, static_cast<std::uint32_t>(
                                       std::ceil(std::sqrt(nd / kd))));
    cfg.sample_prob = std::min(1.0, 4.0 * std::sqrt(kd / nd));
    cfg.budget_regular = static_cast<std::uint64_t>(
        c1 * std::ceil(std::sqrt(nd * kd)));
    cfg.budget_central = static_cast<std::uint64_t>(
        c2 * std::ceil(std::sqrt(nd * kd) * std::log2(kd + 1.0)));
    return cfg;
  }
};

// Well-known message tags. Algorithm-specific tags (e.g. one per OPT
// guess) use small nonnegative integers.
namespace tags {
constexpr int kPartition = -101;  // V_i, delivered to machine i
constexpr int kSample = -102;     // S, broadcast to everyone
constexpr int kSolution = -103;   // running solution G, broadcast by C
constexpr int kTopElements = -104;  // per-machine largest singletons
constexpr int kMaxElement = -105;   // local argmax singleton
}  // namespace tags

struct Message {
  int from = -1;  // -1 = driver (initial distribution)
  int to = 0;
  int tag = 0;
  std::vector<ElementId> elements;
};

struct MachineRoundStats {
  std::uint64_t received = 0;
  std::uint64_t sent = 0;
  std::uint64_t oracle_calls = 0;
};

struct BudgetViolation {
  std::uint32_t compute_round = 0;  // 1-based round that consumed the data
  int machine = 0;
  std::uint64_t received = 0;
  std::uint64_t budget = 0;
};

class BudgetError : public std::runtime_error {
 public:
  BudgetError(const BudgetViolation& v)
      : std::runtime_error("memory budget exceeded: machine " +
                           std::to_string(v.machine) + " received " +
                           std::to_string(v.received) + " > budget " +
                           std::to_string(v.budget) + " in round " +
                           std::to_string(v.compute_round)),
        violation(v) {}
  BudgetViolation violation;
};

class ProtocolError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-round, per-machine accounting. `received` of round r counts the
/// elements delivered into r's inbox (from the previous round's sends
/// and any distribution step in between); `sent` and `oracle_calls`
/// cover the work done during r.
struct RoundLedger {
  struct Round {
    std::vector<MachineRoundStats> per_machine;
  };

  std::vector<Round> rounds;  // index 0 = compute round 1
  std::uint32_t compute_rounds = 0;
  std::uint32_t distribution_steps = 0;
  std::vector<BudgetViolation> violations;

  std::uint32_t algorithm_rounds(bool count_distribution = false) const {
    return compute_rounds +
           (count_distribution ? distribution_steps : 0);
  }

  std::uint64_t received(std::uint32_t round_1based, int machine) const {
    return rounds.at(round_1based - 1).per_machine.at(machine).received;
  }

  std::uint64_t max_received(int machine) const {
    std::uint64_t best = 0;
    for (const auto& r : rounds) {
      best = std::max(best, r.per_machine.at(machine).received);
    }
    return best;
  }

  std::uint64_t total_oracle_calls() const {
    std::uint64_t total = 0;
    for (const auto& r : rounds) {
      for (const auto& m : r.per_machine) total += m.oracle_calls;
    }
    return total;
  }
};

/// Element assignment produced by the partition-and-sample step:
/// disjoint V_1..V_m covering V, plus an element-wise Bernoulli sample
/// S that may intersect any V_i. All lists are in ascending id order.
struct Partition {
  std::vector<std::vector<ElementId>> parts;
  std::vector<ElementId> sample;
};

/// Draws the phase's random partition and sample from named streams of
/// the config seed, so other consumers of the seed are unaffected.
inline Partition partition_and_sample(const ClusterConfig& cfg,
                                      std::uint64_t phase = 0) {
  Partition p;
  p.parts.assign(cfg.machines, {});
  RngStream sample_rng = named_stream(cfg.seed, "sample", phase);
  RngStream part_rng = named_stream(cfg.seed, "partition", phase);
  for (ElementId e = 0; e < cfg.n; ++e) {
    if (sample_rng.next_bernoulli(cfg.sample_prob)) p.sample.push_back(e);
  }
  for (ElementId e = 0; e < cfg.n; ++e) {
    p.parts[part_rng.next_below(cfg.machines)].push_back(e);
  }
  return p;
}

/// Synchronous-round cluster: `machines` workers plus one central
/// machine (id = machines). Programs run on their round inboxes and
/// emit messages which are delivered at the barrier; received counts
/// are checked against the memory budgets when the consuming round
/// starts.
class ClusterSim {
 public:
  explicit ClusterSim(ClusterConfig cfg) : cfg_(std::move(cfg)) {
    inboxes_.assign(total_machines(), {});
    pending_received_.assign(total_machines(), 0);
  }

  const ClusterConfig& config() const { return cfg_; }
  int worker_count() const { return static_cast<int>(cfg_.machines); }
  int central_id() const { return static_cast<int>(cfg_.machines); }
  int total_machines() const { return static_cast<int>(cfg_.machines) + 1; }

  // Oracle whose call counter is sampled around each program to
  // attribute per-machine call counts. Optional.
  void set_accounted_oracle(const SubmodularOracle* oracle) {
    oracle_ = oracle;
  }

  /// Driver-side injection (e.g. PartitionAndSample output). Charged to
  /// the ledger as received data of the next compute round; counted as
  /// a distribution step, not a compute round.
  void distribute(std::vector<Message> messages) {
    for (auto& m : messages) deliver(std::move(m));
    ledger_.distribution_steps += 1;
  }

  using Program =
      std::function<std::vector<Message>(int machine,
                                         const std::vector<Message>& inbox)>;

  /// Runs one synchronous round: every machine's program executes on
  /// its inbox (serially, in machine-id order; programs share no
  /// state, so this matches any parallel interleaving), then all
  /// emitted messages are delivered for the next round.
  void run_round(const Program& program) {
    ledger_.compute_rounds += 1;
    ledger_.rounds.emplace_back();
    auto& record = ledger_.rounds.back();
    record.per_machine.assign(total_machines(), {});
    for (int m = 0; m < total_machines(); ++m) {
      record.per_machine[m].received = pending_received_[m];
      check_budget(m, pending_received_[m]);
      pending_received_[m] = 0;
    }

    std::vector<std::vector<Message>> outboxes(total_machines());
    for (int m = 0; m < total_machines(); ++m) {
      std::uint64_t calls_before = oracle_ ? oracle_->call_count() : 0;
      outboxes[m] = program(m, inboxes_[m]);
      if (oracle_) {
        record.per_machine[m].oracle_calls =
            oracle_->call_count() - calls_before;
      }
    }

    for (auto& inbox : inboxes_) inbox.clear();
    for (int m = 0; m < total_machines(); ++m) {
      for (auto& msg : outboxes[m]) {
        msg.from = m;
        record.per_machine[m].sent += msg.elements.size();
        deliver(std::move(msg));
      }
    }
  }

  // Per-machine closure form; programs.size() must be machines + 1
  // (workers first, central machine last).
  void run_round(const std::vector<Program>& programs) {
    if (static_cast<int>(programs.size()) != total_machines()) {
      throw ProtocolError("run_round: need one program per machine");
    }
    run_round(Program([&](int m, const std::vector<Message>& inbox) {
      return programs[m](m, inbox);
    }));
  }

  const std::vector<Message>& inbox(int machine) const {
    return inboxes_.at(machine);
  }

  const RoundLedger& ledger() const { return ledger_; }

 private:
  void deliver(Message msg) {
    if (msg.to < 0 || msg.to >= total_machines()) {
      throw ProtocolError("message to unknown machine " +
                          std::to_string(msg.to));
    }
    pending_received_[msg.to] += msg.elements.size();
    inboxes_[msg.to].push_back(std::move(msg));
  }

  void check_budget(int machine, std::uint64_t received) {
    if (cfg_.enforcement == Enforcement::kOff) return;
    std::uint64_t budget =
        machine == central_id() ? cfg_.budget_central : cfg_.budget_regular;
    if (received <= budget) return;
    BudgetViolation v{ledger_.compute_rounds, machine, received, budget};
    if (cfg_.enforcement == Enforcement::kFail) throw BudgetError(v);
    ledger_.violations.push_back(v);
  }

  ClusterConfig cfg_;
  std::vector<std::vector<Message>> inboxes_;
  std::vector<std::uint64_t> pending_received_;
  RoundLedger ledger_;
  const SubmodularOracle* oracle_ = nullptr;
};

// Queues V_i to machine i and (optionally) S to every machine
// including the central one.
inline void distribute_partition(ClusterSim& sim, const Partition& p,
                                 bool include_sample = true) {
  std::vector<Message> messages;
  for (int i = 0; i < sim.worker_count(); ++i) {
    messages.push_back({-1, i, tags::kPartition, p.parts[i]});
    if (include_sample) {
      messages.push_back({-1, i, tags::kSample, p.sample});
    }
  }
  if (include_sample) {
    messages.push_back({-1, sim.central_id(), tags::kSample, p.sample});
  }
  sim.distribute(std::move(messages));
}

// Concatenates the payloads of all inbox messages with the given tag,
// in arrival order (sender id, then emission order).
inline std::vector<ElementId> inbox_elements(const std::vector<Message>& inbox,
                                             int tag) {
  std::vector<ElementId> out;
  for (const auto& m : inbox) {
    if (m.tag == tag) out.insert(out.end(), m.elements.begin(),
                                 m.elements.end());
  }
  return out;
}

}  // namespace submr

#endif  // SUBMR_CLUSTER_HPP_
