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

#ifndef SUBMR_ALGORITHMS_HPP_
#define SUBMR_ALGORITHMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "submr/cluster.hpp"
#include "submr/greedy.hpp"
#include "submr/oracle.hpp"

namespace submr {

/// Geometrically decreasing acceptance thresholds
/// alpha_l = (1 - 1/(t+1))^l * opt_estimate / k for l = 1..t.
/// For t = 1 this is the single threshold opt_estimate / (2k).
struct ThresholdSchedule {
  std::uint32_t t = 1;
  double opt_estimate = 0.0;
  std::vector<double> levels;

  static ThresholdSchedule geometric(std::uint32_t t, double opt_estimate,
                                     std::uint32_t k) {
    if (t < 1) throw std::invalid_argument("schedule: t must be >= 1");
    if (opt_estimate <= 0.0 || k == 0) {
      throw std::invalid_argument("schedule: opt_estimate and k must be > 0");
    }
    ThresholdSchedule s;
    s.t = t;
    s.opt_estimate = opt_estimate;
    const double ratio = 1.0 - 1.0 / (t + 1.0);
    double alpha = opt_estimate / k;
    s.levels.reserve(t);
    for (std::uint32_t l = 1; l <= t; ++l) {
      alpha *= ratio;
      s.levels.push_back(alpha);
    }
    return s;
  }
};

// Guaranteed fraction of OPT with t thresholds: 1 - (t/(t+1))^t.
inline double threshold_approximation_bound(std::uint32_t t) {
  return 1.0 - std::pow(t / (t + 1.0), static_cast<double>(t));
}

/// Geometric grid of guessed thresholds tau_j = v (1+eps)^j / k for
/// j in [j_min, j_max]. The range is chosen so the grid covers
/// [v/(2k), v] multiplicatively; with v <= OPT <= k v this places some
/// tau_j within a (1+eps) factor of OPT/(2k).
struct GuessGrid {
  double base = 0.0;  // v
  double epsilon = 0.0;
  std::uint32_t k = 1;
  int j_min = 0;
  int j_max = 0;
  std::vector<double> thresholds;

  static GuessGrid covering(double v, double eps, std::uint32_t k) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw std::invalid_argument("guess grid: eps must be in (0, 1)");
    }
    if (v <= 0.0 || k == 0) {
      throw std::invalid_argument("guess grid: v and k must be > 0");
    }
    GuessGrid g;
    g.base = v;
    g.epsilon = eps;
    g.k = k;
    const double step = std::log1p(eps);
    g.j_min = -static_cast<int>(std::ceil(std::log(2.0) / step));
    g.j_max =
        static_cast<int>(std::ceil(std::log(static_cast<double>(k)) / step));
    g.thresholds.assign(g.size(), 0.0);
    g.thresholds[-g.j_min] = v / k;
    for (int j = 1; j <= g.j_max; ++j) {
      g.thresholds[j - g.j_min] = g.thresholds[j - g.j_min - 1] * (1.0 + eps);
    }
    for (int j = -1; j >= g.j_min; --j) {
      g.thresholds[j - g.j_min] = g.thresholds[j - g.j_min + 1] / (1.0 + eps);
    }
    return g;
  }

  int size() const { return j_max - j_min + 1; }
  double threshold_at(int j) const { return thresholds.at(j - j_min); }
};

/// Per-(phase, guess) audit trail: the core G_0 each machine computed
/// from the shared sample (central machine's recomputation in the last
/// slot) and the elements the central machine received for this guess.
struct GuessDiagnostics {
  std::uint32_t phase = 1;
  int guess_index = 0;
  double threshold = 0.0;
  std::vector<std::vector<ElementId>> g0_per_machine;
  std::vector<ElementId> central_received;
};

struct AlgorithmResult {
  PartialSolution solution;
  RoundLedger ledger;
  std::vector<GuessDiagnostics> diagnostics;
};

namespace detail {

// Broadcast tag for the per-guess running solution; guess tags
// themselves are small nonnegative ints.
constexpr int kGuessSolutionTagBase = 1 << 20;

inline void require_matching_instance(const ClusterConfig& cfg,
                                      const SubmodularOracle& f) {
  if (cfg.n != f.ground().n) {
    throw std::invalid_argument("algorithm: config n != oracle ground size");
  }
}

// Rebuilds a partial solution from an element list, re-evaluating its
// value so every machine works from bit-identical state (one call).
inline PartialSolution rebuild_solution(const SubmodularOracle& f,
                                        std::span<const ElementId> elements,
                                        std::uint32_t k) {
  PartialSolution g;
  g.k = k;
  g.elements.assign(elements.begin(), elements.end());
  g.insertion_marginals.assign(elements.size(), 0.0);
  g.value = f.evaluate(g.elements);
  return g;
}

inline std::vector<ElementId> sorted_ids(std::vector<ElementId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Largest `limit` elements of `pool` by singleton value, ties by
// smaller id. One oracle call per pool element.
inline std::vector<ElementId> top_by_singleton(const SubmodularOracle& f,
                                               std::span<const ElementId> pool,
                                               std::size_t limit) {
  std::vector<std::pair<double, ElementId>> ranked;
  ranked.reserve(pool.size());
  for (ElementId e : pool) {
    ElementId single[1] = {e};
    ranked.emplace_back(f.evaluate(std::span<const ElementId>(single)), e);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (ranked.size() > limit) ranked.resize(limit);
  std::vector<ElementId> out;
  out.reserve(ranked.size());
  for (const auto& [value, e] : ranked) out.push_back(e);
  return out;
}

inline double max_singleton(const SubmodularOracle& f,
                            std::span<const ElementId> pool) {
  double v = 0.0;
  for (ElementId e : pool) {
    ElementId single[1] = {e};
    v = std::max(v, f.evaluate(std::span<const ElementId>(single)));
  }
  return v;
}

// Accumulates GuessDiagnostics rows keyed by (phase, guess). Machines
// run serially within a round, so filling rows from machine code is
// race-free.
class DiagnosticsBuilder {
 public:
  explicit DiagnosticsBuilder(int machine_slots) : slots_(machine_slots) {}

  GuessDiagnostics& row(std::uint32_t phase, int j, double tau) {
    auto key = std::make_pair(phase, j);
    auto it = index_.find(key);
    if (it == index_.end()) {
      rows_.push_back({phase, j, tau, {}, {}});
      rows_.back().g0_per_machine.assign(slots_, {});
      index_.emplace(key, rows_.size() - 1);
      return rows_.back();
    }
    return rows_[it->second];
  }

  std::vector<GuessDiagnostics> take() { return std::move(rows_); }

 private:
  int slots_;
  std::vector<GuessDiagnostics> rows_;
  std::map<std::pair<std::uint32_t, int>, std::size_t> index_;
};

}  // namespace detail

/// 2-round algorithm assuming the optimum value is known: every machine
/// grows the same greedy core G_0 from the shared sample at threshold
/// opt / (2k), filters its own part against it, and the central machine
/// completes the solution from the survivors. Guarantees
/// f(G) >= min(opt, OPT) / 2.
inline AlgorithmResult two_round_known_opt(const ClusterConfig& cfg,
                                           const SubmodularOracle& f,
                                           double opt) {
  detail::require_matching_instance(cfg, f);
  const double tau = ThresholdSchedule::geometric(1, opt, cfg.k).levels[0];

  ClusterSim sim(cfg);
  sim.set_accounted_oracle(&f);
  const int central = sim.central_id();

  Partition part = partition_and_sample(cfg, 0);
  distribute_partition(sim, part, true);

  AlgorithmResult out;
  detail::DiagnosticsBuilder diags(sim.total_machines());
  std::vector<ElementId> sample_at_central;

  // Round 1: workers compute G_0 from S and send the survivors of
  // their own part; a machine whose G_0 is already full sends nothing.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m == central) {
      sample_at_central = inbox_elements(inbox, tags::kSample);
      return {};
    }
    auto sample = inbox_elements(inbox, tags::kSample);
    auto part_i = inbox_elements(inbox, tags::kPartition);
    PartialSolution g0 =
        threshold_greedy(f, sample, empty_solution(f, cfg.k), tau);
    diags.row(1, 0, tau).g0_per_machine[m] = g0.elements;
    std::vector<ElementId> survivors;
    if (!g0.full()) survivors = threshold_filter(f, part_i, g0, tau);
    return {{m, central, 0, std::move(survivors)}};
  });

  // Round 2: the central machine recomputes G_0 from S and finishes.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m != central) return {};
    PartialSolution g0 = threshold_greedy(f, sample_at_central,
                                          empty_solution(f, cfg.k), tau);
    auto& diag = diags.row(1, 0, tau);
    diag.g0_per_machine[m] = g0.elements;
    diag.central_received = inbox_elements(inbox, 0);
    auto pool = detail::sorted_ids(diag.central_received);
    out.solution = threshold_greedy(f, pool, std::move(g0), tau);
    return {};
  });

  out.ledger = sim.ledger();
  out.diagnostics = diags.take();
  return out;
}

/// 2t-round generalization: t phases, each with a fresh partition and
/// sample, running the threshold schedule alpha_l with the solution
/// carried across phases. Guarantees
/// f(G) >= (1 - (1 - 1/(t+1))^t) * min(opt, OPT).
inline AlgorithmResult multi_round(const ClusterConfig& cfg,
                                   const SubmodularOracle& f, double opt,
                                   std::uint32_t t) {
  detail::require_matching_instance(cfg, f);
  ThresholdSchedule schedule = ThresholdSchedule::geometric(t, opt, cfg.k);

  ClusterSim sim(cfg);
  sim.set_accounted_oracle(&f);
  const int central = sim.central_id();

  AlgorithmResult out;
  detail::DiagnosticsBuilder diags(sim.total_machines());
  std::vector<ElementId> sample_at_central;
  PartialSolution central_g;  // C's running solution across phases
  bool central_g_init = false;

  for (std::uint32_t phase = 1; phase <= t; ++phase) {
    const double alpha = schedule.levels[phase - 1];
    Partition part = partition_and_sample(cfg, phase - 1);
    distribute_partition(sim, part, true);

    // Round 2*phase - 1: workers extend the carried solution over the
    // fresh sample, then filter their parts against it.
    sim.run_round([&](int m, const std::vector<Message>& inbox)
                      -> std::vector<Message> {
      if (m == central) {
        sample_at_central = inbox_elements(inbox, tags::kSample);
        return {};
      }
      auto sample = inbox_elements(inbox, tags::kSample);
      auto part_i = inbox_elements(inbox, tags::kPartition);
      PartialSolution base =
          phase == 1 ? empty_solution(f, cfg.k)
                     : detail::rebuild_solution(
                           f, inbox_elements(inbox, tags::kSolution), cfg.k);
      PartialSolution g0 = threshold_greedy(f, sample, std::move(base), alpha);
      diags.row(phase, 0, alpha).g0_per_machine[m] = g0.elements;
      std::vector<ElementId> survivors;
      if (!g0.full()) survivors = threshold_filter(f, part_i, g0, alpha);
      return {{m, central, 0, std::move(survivors)}};
    });

    // Round 2*phase: C recomputes G_0 from S, completes this level, and
    // (between phases) broadcasts the running solution.
    sim.run_round([&](int m, const std::vector<Message>& inbox)
                      -> std::vector<Message> {
      if (m != central) return {};
      PartialSolution base =
          central_g_init
              ? detail::rebuild_solution(f, central_g.elements, cfg.k)
              : empty_solution(f, cfg.k);
      PartialSolution g0 =
          threshold_greedy(f, sample_at_central, std::move(base), alpha);
      auto& diag = diags.row(phase, 0, alpha);
      diag.g0_per_machine[m] = g0.elements;
      diag.central_received = inbox_elements(inbox, 0);
      auto pool = detail::sorted_ids(diag.central_received);
      central_g = threshold_greedy(f, pool, std::move(g0), alpha);
      central_g_init = true;
      std::vector<Message> msgs;
      if (phase < t) {
        for (int i = 0; i < sim.worker_count(); ++i) {
          msgs.push_back({m, i, tags::kSolution, central_g.elements});
        }
      }
      return msgs;
    });
  }

  out.solution = std::move(central_g);
  out.ledger = sim.ledger();
  out.diagnostics = diags.take();
  return out;
}

/// 2-round variant for inputs with many high-value elements: the exact
/// threshold is unknown, so every machine runs the known-OPT algorithm
/// for a geometric grid of guesses derived from the sample's best
/// singleton, and the central machine keeps the best completed
/// solution.
inline AlgorithmResult dense_two_round(const ClusterConfig& cfg,
                                       const SubmodularOracle& f, double eps) {
  detail::require_matching_instance(cfg, f);
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("dense_two_round: eps must be in (0, 1)");
  }

  ClusterSim sim(cfg);
  sim.set_accounted_oracle(&f);
  const int central = sim.central_id();

  Partition part = partition_and_sample(cfg, 0);
  distribute_partition(sim, part, true);

  AlgorithmResult out;
  detail::DiagnosticsBuilder diags(sim.total_machines());
  std::vector<ElementId> sample_at_central;

  // Round 1: per-guess core + filter, all guesses sharing the sample.
  // The guess value v is taken over the shared sample so every machine
  // derives the identical grid.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m == central) {
      sample_at_central = inbox_elements(inbox, tags::kSample);
      return {};
    }
    auto sample = inbox_elements(inbox, tags::kSample);
    auto part_i = inbox_elements(inbox, tags::kPartition);
    double v = detail::max_singleton(f, sample);
    if (v <= 0.0) return {};
    GuessGrid grid = GuessGrid::covering(v, eps, cfg.k);
    std::vector<Message> msgs;
    for (int j = grid.j_min; j <= grid.j_max; ++j) {
      const double tau = grid.threshold_at(j);
      PartialSolution g0 =
          threshold_greedy(f, sample, empty_solution(f, cfg.k), tau);
      diags.row(1, j, tau).g0_per_machine[m] = g0.elements;
      std::vector<ElementId> survivors;
      if (!g0.full()) survivors = threshold_filter(f, part_i, g0, tau);
      msgs.push_back({m, central, j - grid.j_min, std::move(survivors)});
    }
    return msgs;
  });

  // Round 2: C recomputes each guess's core, completes it, returns the
  // best solution over the grid.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m != central) return {};
    double v = detail::max_singleton(f, sample_at_central);
    if (v <= 0.0) {
      out.solution = empty_solution(f, cfg.k);
      return {};
    }
    GuessGrid grid = GuessGrid::covering(v, eps, cfg.k);
    PartialSolution best;
    bool have_best = false;
    for (int j = grid.j_min; j <= grid.j_max; ++j) {
      const double tau = grid.threshold_at(j);
      PartialSolution g0 = threshold_greedy(f, sample_at_central,
                                            empty_solution(f, cfg.k), tau);
      auto& diag = diags.row(1, j, tau);
      diag.g0_per_machine[m] = g0.elements;
      diag.central_received = inbox_elements(inbox, j - grid.j_min);
      auto pool = detail::sorted_ids(diag.central_received);
      PartialSolution gj = threshold_greedy(f, pool, std::move(g0), tau);
      if (!have_best || gj.value > best.value) {
        best = std::move(gj);
        have_best = true;
      }
    }
    out.solution = have_best ? std::move(best) : empty_solution(f, cfg.k);
    return {};
  });

  out.ledger = sim.ledger();
  out.diagnostics = diags.take();
  return out;
}

/// 2-round variant for inputs with few high-value elements: each
/// machine forwards its c_large * k largest singletons, and the central
/// machine runs the guessed-threshold greedy over everything it
/// received.
inline AlgorithmResult sparse_two_round(const ClusterConfig& cfg,
                                        const SubmodularOracle& f, double eps,
                                        std::uint32_t c_large = 4) {
  detail::require_matching_instance(cfg, f);
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("sparse_two_round: eps must be in (0, 1)");
  }
  if (c_large < 1) {
    throw std::invalid_argument("sparse_two_round: c_large must be >= 1");
  }

  ClusterSim sim(cfg);
  sim.set_accounted_oracle(&f);
  const int central = sim.central_id();

  Partition part = partition_and_sample(cfg, 0);
  distribute_partition(sim, part, /*include_sample=*/false);

  AlgorithmResult out;
  detail::DiagnosticsBuilder diags(sim.total_machines());

  // Round 1: forward the largest singletons of each part.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m == central) return {};
    auto part_i = inbox_elements(inbox, tags::kPartition);
    auto top = detail::top_by_singleton(
        f, part_i, static_cast<std::size_t>(c_large) * cfg.k);
    return {{m, central, tags::kTopElements, std::move(top)}};
  });

  // Round 2: guessed-threshold greedy entirely on C.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m != central) return {};
    auto received = inbox_elements(inbox, tags::kTopElements);
    auto pool = detail::sorted_ids(received);
    double v = detail::max_singleton(f, pool);
    if (v <= 0.0) {
      out.solution = empty_solution(f, cfg.k);
      return {};
    }
    GuessGrid grid = GuessGrid::covering(v, eps, cfg.k);
    PartialSolution best;
    bool have_best = false;
    for (int j = grid.j_min; j <= grid.j_max; ++j) {
      const double tau = grid.threshold_at(j);
      PartialSolution gj =
          threshold_greedy(f, pool, empty_solution(f, cfg.k), tau);
      diags.row(1, j, tau).central_received = received;
      if (!have_best || gj.value > best.value) {
        best = std::move(gj);
        have_best = true;
      }
    }
    out.solution = std::move(best);
    return {};
  });

  out.ledger = sim.ledger();
  out.diagnostics = diags.take();
  return out;
}

/// Runs the dense and sparse 2-round algorithms side by side in the
/// same two rounds (one shared partition, one shared sample) and
/// returns the better of the two solutions. This removes the need to
/// know which regime the input is in.
inline AlgorithmResult combined_two_round(const ClusterConfig& cfg,
                                          const SubmodularOracle& f,
                                          double eps,
                                          std::uint32_t c_large = 4) {
  detail::require_matching_instance(cfg, f);
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("combined_two_round: eps must be in (0, 1)");
  }

  ClusterSim sim(cfg);
  sim.set_accounted_oracle(&f);
  const int central = sim.central_id();

  Partition part = partition_and_sample(cfg, 0);
  distribute_partition(sim, part, true);

  AlgorithmResult out;
  detail::DiagnosticsBuilder diags(sim.total_machines());
  std::vector<ElementId> sample_at_central;

  // Round 1: each machine runs both round-1 programs.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m == central) {
      sample_at_central = inbox_elements(inbox, tags::kSample);
      return {};
    }
    auto sample = inbox_elements(inbox, tags::kSample);
    auto part_i = inbox_elements(inbox, tags::kPartition);
    std::vector<Message> msgs;

    double v = detail::max_singleton(f, sample);
    if (v > 0.0) {
      GuessGrid grid = GuessGrid::covering(v, eps, cfg.k);
      for (int j = grid.j_min; j <= grid.j_max; ++j) {
        const double tau = grid.threshold_at(j);
        PartialSolution g0 =
            threshold_greedy(f, sample, empty_solution(f, cfg.k), tau);
        diags.row(1, j, tau).g0_per_machine[m] = g0.elements;
        std::vector<ElementId> survivors;
        if (!g0.full()) survivors = threshold_filter(f, part_i, g0, tau);
        msgs.push_back({m, central, j - grid.j_min, std::move(survivors)});
      }
    }
    auto top = detail::top_by_singleton(
        f, part_i, static_cast<std::size_t>(c_large) * cfg.k);
    msgs.push_back({m, central, tags::kTopElements, std::move(top)});
    return msgs;
  });

  // Round 2: C completes both algorithms and keeps the better result.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m != central) return {};
    PartialSolution best_dense = empty_solution(f, cfg.k);
    double v_dense = detail::max_singleton(f, sample_at_central);
    if (v_dense > 0.0) {
      GuessGrid grid = GuessGrid::covering(v_dense, eps, cfg.k);
      bool have = false;
      for (int j = grid.j_min; j <= grid.j_max; ++j) {
        const double tau = grid.threshold_at(j);
        PartialSolution g0 = threshold_greedy(f, sample_at_central,
                                              empty_solution(f, cfg.k), tau);
        auto& diag = diags.row(1, j, tau);
        diag.g0_per_machine[m] = g0.elements;
        diag.central_received = inbox_elements(inbox, j - grid.j_min);
        auto pool = detail::sorted_ids(diag.central_received);
        PartialSolution gj = threshold_greedy(f, pool, std::move(g0), tau);
        if (!have || gj.value > best_dense.value) {
          best_dense = std::move(gj);
          have = true;
        }
      }
    }

    PartialSolution best_sparse = empty_solution(f, cfg.k);
    auto received = inbox_elements(inbox, tags::kTopElements);
    auto pool = detail::sorted_ids(received);
    double v_sparse = detail::max_singleton(f, pool);
    if (v_sparse > 0.0) {
      GuessGrid grid = GuessGrid::covering(v_sparse, eps, cfg.k);
      bool have = false;
      for (int j = grid.j_min; j <= grid.j_max; ++j) {
        const double tau = grid.threshold_at(j);
        PartialSolution gj =
            threshold_greedy(f, pool, empty_solution(f, cfg.k), tau);
        if (!have || gj.value > best_sparse.value) {
          best_sparse = std::move(gj);
          have = true;
        }
      }
    }

    out.solution = best_sparse.value > best_dense.value
                       ? std::move(best_sparse)
                       : std::move(best_dense);
    return {};
  });

  out.ledger = sim.ledger();
  out.diagnostics = diags.take();
  return out;
}

/// Full pipeline when nothing about OPT is known: one initial round to
/// agree on the best singleton value v (so OPT lies in [v, k v]), then
/// the 2t-round schedule run in parallel for a geometric grid of OPT
/// guesses, then one final round picking the best candidate. 2t + 2
/// rounds total; guarantees
/// f(G) >= (1 - (1 - 1/(t+1))^t - eps) * OPT.
inline AlgorithmResult multi_round_unknown_opt(const ClusterConfig& cfg,
                                               const SubmodularOracle& f,
                                               double eps, std::uint32_t t) {
  detail::require_matching_instance(cfg, f);
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("unknown_opt: eps must be in (0, 1)");
  }
  if (t < 1) throw std::invalid_argument("unknown_opt: t must be >= 1");

  ClusterSim sim(cfg);
  sim.set_accounted_oracle(&f);
  const int central = sim.central_id();
  const int machines = sim.total_machines();

  // Initial partition, used only to find local maxima.
  Partition max_part = partition_and_sample(cfg, /*phase=*/0xffffffffULL);
  {
    std::vector<Message> msgs;
    for (int i = 0; i < sim.worker_count(); ++i) {
      msgs.push_back({-1, i, tags::kPartition, max_part.parts[i]});
    }
    sim.distribute(std::move(msgs));
  }

  AlgorithmResult out;
  detail::DiagnosticsBuilder diags(machines);

  // Initial round: every machine broadcasts its best singleton; from
  // the next round on, all machines know v = max_e f({e}).
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m == central) return {};
    auto part_i = inbox_elements(inbox, tags::kPartition);
    auto top = detail::top_by_singleton(f, part_i, 1);
    std::vector<Message> msgs;
    for (int to = 0; to < machines; ++to) {
      msgs.push_back({m, to, tags::kMaxElement, top});
    }
    return msgs;
  });

  // Number of OPT guesses covering [v, k v] by factors of (1 + eps).
  const int guess_count =
      1 + static_cast<int>(std::ceil(std::log(static_cast<double>(cfg.k)) /
                                     std::log1p(eps)));

  std::vector<ElementId> max_candidates(machines, 0);
  std::vector<bool> have_candidates(machines, false);
  std::vector<ElementId> sample_at_central;
  std::vector<PartialSolution> central_g(guess_count);
  bool central_g_init = false;
  bool degenerate = false;  // all singletons worthless

  auto shared_v = [&](int m) {
    // v from the candidates this machine saw; identical on every
    // machine because everyone received the same broadcasts.
    ElementId single[1] = {max_candidates[m]};
    return have_candidates[m] ? f.evaluate(std::span<const ElementId>(single))
                              : 0.0;
  };

  for (std::uint32_t phase = 1; phase <= t; ++phase) {
    Partition part = partition_and_sample(cfg, phase - 1);
    distribute_partition(sim, part, true);

    // Round 2*phase: per-guess core + filter on the workers.
    sim.run_round([&](int m, const std::vector<Message>& inbox)
                      -> std::vector<Message> {
      if (phase == 1) {
        auto candidates = inbox_elements(inbox, tags::kMaxElement);
        if (!candidates.empty()) {
          max_candidates[m] = detail::top_by_singleton(f, candidates, 1)[0];
          have_candidates[m] = true;
        }
      }
      if (m == central) {
        sample_at_central = inbox_elements(inbox, tags::kSample);
        return {};
      }
      double v = shared_v(m);
      if (v <= 0.0) return {};
      auto sample = inbox_elements(inbox, tags::kSample);
      auto part_i = inbox_elements(inbox, tags::kPartition);
      std::vector<Message> msgs;
      for (int j = 0; j < guess_count; ++j) {
        const double opt_guess = v * std::pow(1.0 + eps, j);
        const double alpha =
            ThresholdSchedule::geometric(t, opt_guess, cfg.k)
                .levels[phase - 1];
        PartialSolution base =
            phase == 1
                ? empty_solution(f, cfg.k)
                : detail::rebuild_solution(
                      f,
                      inbox_elements(inbox,
                                     detail::kGuessSolutionTagBase + j),
                      cfg.k);
        PartialSolution g0 =
            threshold_greedy(f, sample, std::move(base), alpha);
        diags.row(phase, j, alpha).g0_per_machine[m] = g0.elements;
        std::vector<ElementId> survivors;
        if (!g0.full()) survivors = threshold_filter(f, part_i, g0, alpha);
        msgs.push_back({m, central, j, std::move(survivors)});
      }
      return msgs;
    });

    // Round 2*phase + 1: C completes each guess and rebroadcasts the
    // per-guess running solutions.
    sim.run_round([&](int m, const std::vector<Message>& inbox)
                      -> std::vector<Message> {
      if (m != central) return {};
      double v = shared_v(m);
      if (v <= 0.0) {
        degenerate = true;
        return {};
      }
      std::vector<Message> msgs;
      for (int j = 0; j < guess_count; ++j) {
        const double opt_guess = v * std::pow(1.0 + eps, j);
        const double alpha =
            ThresholdSchedule::geometric(t, opt_guess, cfg.k)
                .levels[phase - 1];
        PartialSolution base =
            central_g_init
                ? detail::rebuild_solution(f, central_g[j].elements, cfg.k)
                : empty_solution(f, cfg.k);
        PartialSolution g0 =
            threshold_greedy(f, sample_at_central, std::move(base), alpha);
        auto& diag = diags.row(phase, j, alpha);
        diag.g0_per_machine[m] = g0.elements;
        diag.central_received = inbox_elements(inbox, j);
        auto pool = detail::sorted_ids(diag.central_received);
        central_g[j] = threshold_greedy(f, pool, std::move(g0), alpha);
        if (phase < t) {
          for (int i = 0; i < sim.worker_count(); ++i) {
            msgs.push_back({m, i, detail::kGuessSolutionTagBase + j,
                            central_g[j].elements});
          }
        }
      }
      central_g_init = true;
      return msgs;
    });
  }

  // Final round: C picks the best guess.
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    (void)inbox;
    if (m != central) return {};
    if (degenerate || !central_g_init) {
      out.solution = empty_solution(f, cfg.k);
      return {};
    }
    int best = 0;
    for (int j = 1; j < guess_count; ++j) {
      if (central_g[j].value > central_g[best].value) best = j;
    }
    out.solution = std::move(central_g[best]);
    return {};
  });

  out.ledger = sim.ledger();
  out.diagnostics = diags.take();
  return out;
}

}  // namespace submr

#endif  // SUBMR_ALGORITHMS_HPP_
