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

#ifndef SUBMR_EXPERIMENT_HPP_
#define SUBMR_EXPERIMENT_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "submr/adversarial.hpp"
#include "submr/algorithms.hpp"
#include "submr/cluster.hpp"
#include "submr/coverage.hpp"
#include "submr/greedy.hpp"
#include "submr/instance_io.hpp"
#include "submr/oracle.hpp"

namespace submr {

enum class AlgorithmKind {
  kGreedy,
  kBruteForce,
  kTwoRound,
  kMultiRound,
  kDense,
  kSparse,
  kCombined,
  kUnknownOpt,
  kTightness,
};

inline const char* algorithm_name(AlgorithmKind a) {
  switch (a) {
    case AlgorithmKind::kGreedy: return "greedy";
    case AlgorithmKind::kBruteForce: return "bruteforce";
    case AlgorithmKind::kTwoRound: return "tworound";
    case AlgorithmKind::kMultiRound: return "multiround";
    case AlgorithmKind::kDense: return "dense";
    case AlgorithmKind::kSparse: return "sparse";
    case AlgorithmKind::kCombined: return "combined";
    case AlgorithmKind::kUnknownOpt: return "unknownopt";
    case AlgorithmKind::kTightness: return "tightness";
  }
  return "?";
}

inline AlgorithmKind algorithm_from_name(const std::string& name) {
  for (AlgorithmKind a :
       {AlgorithmKind::kGreedy, AlgorithmKind::kBruteForce,
        AlgorithmKind::kTwoRound, AlgorithmKind::kMultiRound,
        AlgorithmKind::kDense, AlgorithmKind::kSparse,
        AlgorithmKind::kCombined, AlgorithmKind::kUnknownOpt,
        AlgorithmKind::kTightness}) {
    if (name == algorithm_name(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

enum class OptMode { kBruteForce, kProvided, kNone };

/// Where the trial instances come from: a file (fixed across trials) or
/// a named generator (regenerated per trial with the trial seed).
struct InstanceSource {
  std::string file;       // non-empty selects the file source
  std::string generator;  // random-coverage | planted-sparse |
                          // uniform-additive | adversarial
  RandomCoverageParams coverage;
  std::uint32_t gen_n = 100;
  std::uint32_t gen_k = 10;      // planted-sparse planted count
  double gen_value = 1.0;        // uniform-additive per-element value
  std::uint32_t gen_t = 1;       // adversarial levels
  double gen_vstar = 1.0;
};

struct ExperimentSpec {
  InstanceSource instance;
  AlgorithmKind algorithm = AlgorithmKind::kGreedy;
  std::uint32_t k = 1;
  std::uint32_t t = 1;
  double eps = 0.1;
  std::uint32_t c_large = 4;
  std::vector<std::uint64_t> seeds;  // explicit list wins over seed_count
  std::uint32_t seed_count = 1;      // otherwise seeds 1..seed_count
  OptMode opt_mode = OptMode::kNone;
  double opt_value = 0.0;
  double enumeration_cap = 1e7;

  // Cluster overrides; 0 / negative means "use the default".
  std::uint32_t machines_override = 0;
  double sample_prob_override = -1.0;
  std::uint64_t budget_regular_override = 0;
  std::uint64_t budget_central_override = 0;
  double c1 = 8.0;
  double c2 = 8.0;
  Enforcement enforcement = Enforcement::kWarn;

  bool count_distribution_round = false;
  std::uint32_t threads = 1;  // 0 = hardware concurrency
};

struct TrialRow {
  std::uint64_t seed = 0;
  double value = 0.0;
  std::optional<double> opt;
  std::optional<double> ratio;
  std::optional<double> ratio_vs_greedy;
  std::uint32_t rounds = 0;
  std::uint64_t max_central_load = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t budget_violations = 0;
  std::string error;   // nonempty = trial aborted (budget/cap/...)
  double wall_ms = 0.0;  // reported in JSON only, never in CSV
  RoundLedger ledger;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<TrialRow> rows;

  double min_ratio() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      if (r.ratio) best = std::min(best, *r.ratio);
    }
    return best;
  }

  double mean_ratio() const {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& r : rows) {
      if (r.ratio) {
        total += *r.ratio;
        ++count;
      }
    }
    return count ? total / count : std::numeric_limits<double>::quiet_NaN();
  }

  double violation_rate() const {
    if (rows.empty()) return 0.0;
    std::size_t bad = 0;
    for (const auto& r : rows) {
      if (r.budget_violations > 0 || !r.error.empty()) ++bad;
    }
    return static_cast<double>(bad) / rows.size();
  }

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

namespace detail {

inline std::string csv_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

// One comma-free token so rows stay machine-splittable.
inline std::string csv_sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

inline std::unique_ptr<SubmodularOracle> build_instance(
    const InstanceSource& src, std::uint64_t seed,
    const SubmodularOracle* file_instance) {
  if (!src.file.empty()) return file_instance->clone();
  if (src.generator == "random-coverage") {
    return std::make_unique<CoverageOracle>(
        make_random_coverage(src.coverage, seed));
  }
  if (src.generator == "planted-sparse") {
    return std::make_unique<AdditiveOracle>(
        make_planted_sparse(src.gen_n, src.gen_k, seed));
  }
  if (src.generator == "uniform-additive") {
    return std::make_unique<AdditiveOracle>(
        make_uniform_additive(src.gen_n, src.gen_value));
  }
  if (src.generator == "adversarial") {
    return std::make_unique<AdversarialOracle>(AdversarialInstance::geometric(
        src.gen_t, src.gen_k, src.gen_vstar));
  }
  throw std::invalid_argument("unknown instance generator '" + src.generator +
                              "'");
}

inline ClusterConfig make_cluster_config(const ExperimentSpec& spec,
                                         std::uint32_t n,
                                         std::uint64_t seed) {
  ClusterConfig cfg =
      ClusterConfig::with_defaults(n, spec.k, seed, spec.c1, spec.c2);
  if (spec.machines_override > 0) cfg.machines = spec.machines_override;
  if (spec.sample_prob_override > 0.0) {
    cfg.sample_prob = std::min(1.0, spec.sample_prob_override);
  }
  if (spec.budget_regular_override > 0) {
    cfg.budget_regular = spec.budget_regular_override;
  }
  if (spec.budget_central_override > 0) {
    cfg.budget_central = spec.budget_central_override;
  }
  cfg.enforcement = spec.enforcement;
  return cfg;
}

}  // namespace detail

/// Runs one seeded trial. Oracle-call counts in the row cover the
/// algorithm run only; the greedy baseline and the brute-force optimum
/// are computed on separate oracle clones.
inline TrialRow run_trial(const ExperimentSpec& spec, std::uint64_t seed,
                          const SubmodularOracle* file_instance) {
  TrialRow row;
  row.seed = seed;
  auto started = std::chrono::steady_clock::now();
  try {
    std::unique_ptr<SubmodularOracle> oracle =
        detail::build_instance(spec.instance, seed, file_instance);
    const std::uint32_t n = oracle->ground().n;

    if (spec.algorithm == AlgorithmKind::kTightness) {
      TightnessResult tight =
          tightness_experiment(spec.t, spec.k, spec.instance.gen_vstar);
      row.value = tight.solution.value;
      row.opt = tight.optimum;
      row.ratio = tight.ratio;
      row.oracle_calls = 0;  // runs on its own instance
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
      return row;
    }

    std::vector<ElementId> universe = all_elements(oracle->ground());

    // Baseline and optimum on separate clones.
    std::unique_ptr<SubmodularOracle> baseline_oracle = oracle->clone();
    PartialSolution greedy =
        sequential_greedy(*baseline_oracle, universe, spec.k);

    std::optional<double> opt;
    if (spec.opt_mode == OptMode::kBruteForce) {
      std::unique_ptr<SubmodularOracle> bf_oracle = oracle->clone();
      opt = brute_force_opt(*bf_oracle, universe, spec.k,
                            spec.enumeration_cap)
                .value;
    } else if (spec.opt_mode == OptMode::kProvided) {
      opt = spec.opt_value;
    }
    // Algorithms that need an OPT estimate fall back to the greedy
    // value when none was supplied.
    const double opt_estimate = opt ? *opt : greedy.value;

    ClusterConfig cfg = detail::make_cluster_config(spec, n, seed);

    std::optional<AlgorithmResult> result;
    switch (spec.algorithm) {
      case AlgorithmKind::kGreedy:
        row.value = greedy.value;
        row.oracle_calls = baseline_oracle->call_count();
        break;
      case AlgorithmKind::kBruteForce: {
        std::unique_ptr<SubmodularOracle> bf = oracle->clone();
        BruteForceResult best =
            brute_force_opt(*bf, universe, spec.k, spec.enumeration_cap);
        row.value = best.value;
        row.oracle_calls = bf->call_count();
        break;
      }
      case AlgorithmKind::kTwoRound:
        result = two_round_known_opt(cfg, *oracle, opt_estimate);
        break;
      case AlgorithmKind::kMultiRound:
        result = multi_round(cfg, *oracle, opt_estimate, spec.t);
        break;
      case AlgorithmKind::kDense:
        result = dense_two_round(cfg, *oracle, spec.eps);
        break;
      case AlgorithmKind::kSparse:
        result = sparse_two_round(cfg, *oracle, spec.eps, spec.c_large);
        break;
      case AlgorithmKind::kCombined:
        result = combined_two_round(cfg, *oracle, spec.eps, spec.c_large);
        break;
      case AlgorithmKind::kUnknownOpt:
        result = multi_round_unknown_opt(cfg, *oracle, spec.eps, spec.t);
        break;
      case AlgorithmKind::kTightness:
        break;  // handled above
    }

    if (result) {
      row.value = result->solution.value;
      row.rounds =
          result->ledger.algorithm_rounds(spec.count_distribution_round);
      row.max_central_load =
          result->ledger.max_received(static_cast<int>(cfg.machines));
      row.oracle_calls = oracle->call_count();
      row.budget_violations = result->ledger.violations.size();
      row.ledger = std::move(result->ledger);
    }
    if (opt) {
      row.opt = opt;
      row.ratio = *opt > 0.0 ? row.value / *opt : 1.0;
    }
    row.ratio_vs_greedy =
        greedy.value > 0.0 ? row.value / greedy.value : 1.0;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - started)
                    .count();
  return row;
}

/// Runs every seeded trial of the spec (in parallel when
/// spec.threads != 1; rows are always ordered by the seed list, and
/// their content does not depend on the thread count). Per-trial
/// failures are recorded in the row, never thrown.
inline ExperimentReport run_experiment(const ExperimentSpec& spec_in) {
  ExperimentSpec spec = spec_in;

  if (spec.seeds.empty()) {
    for (std::uint64_t s = 1; s <= spec.seed_count; ++s) {
      spec.seeds.push_back(s);
    }
  }
  if (const char* env = std::getenv("SUBMR_SEED")) {
    spec.seeds = {parse_u64(env)};
  }

  // Load a file instance once; trials clone it.
  std::unique_ptr<SubmodularOracle> file_instance;
  if (!spec.instance.file.empty()) {
    file_instance = load_instance(spec.instance.file).oracle;
  }

  if (spec.opt_mode == OptMode::kBruteForce) {
    std::uint32_t n = file_instance
                          ? file_instance->ground().n
                          : detail::build_instance(spec.instance,
                                                   spec.seeds.empty()
                                                       ? 1
                                                       : spec.seeds.front(),
                                                   nullptr)
                                ->ground().n;
    if (binomial_estimate(n, std::min(spec.k, n)) > spec.enumeration_cap) {
      throw std::invalid_argument(
          "bruteforce opt mode refused: C(n, k) exceeds the enumeration cap");
    }
  }
  if (spec.opt_mode == OptMode::kProvided && spec.opt_value <= 0.0) {
    throw std::invalid_argument("provided opt value must be > 0");
  }

  ExperimentReport report;
  report.spec = spec;
  report.rows.resize(spec.seeds.size());

  std::uint32_t threads = spec.threads == 0
                              ? std::max(1u, std::thread::hardware_concurrency())
                              : spec.threads;
  threads = std::min<std::uint32_t>(
      threads, std::max<std::uint32_t>(
                   1, static_cast<std::uint32_t>(spec.seeds.size())));

  if (threads <= 1 || spec.seeds.size() <= 1) {
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
      report.rows[i] = run_trial(spec, spec.seeds[i], file_instance.get());
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= spec.seeds.size()) break;
        report.rows[i] = run_trial(spec, spec.seeds[i], file_instance.get());
      }
    };
    std::vector<std::thread> pool;
    for (std::uint32_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return report;
}

inline Enforcement enforcement_from_name(const std::string& name) {
  if (name == "off") return Enforcement::kOff;
  if (name == "warn") return Enforcement::kWarn;
  if (name == "fail") return Enforcement::kFail;
  throw std::invalid_argument("unknown enforcement '" + name + "'");
}

/// Builds a spec from its JSON form (the `--spec` file of the CLI).
inline ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  if (!j.contains("algorithm")) {
    throw std::invalid_argument("spec: missing 'algorithm'");
  }
  spec.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());

  if (j.contains("instance")) {
    const auto& inst = j.at("instance");
    if (inst.contains("file")) {
      spec.instance.file = inst.at("file").get<std::string>();
    } else if (inst.contains("generator")) {
      spec.instance.generator = inst.at("generator").get<std::string>();
      if (inst.contains("n")) {
        spec.instance.gen_n = inst.at("n").get<std::uint32_t>();
        spec.instance.coverage.n = spec.instance.gen_n;
      }
      if (inst.contains("universe")) {
        spec.instance.coverage.universe = inst.at("universe").get<std::uint32_t>();
      }
      if (inst.contains("max_set_size")) {
        spec.instance.coverage.max_set_size =
            inst.at("max_set_size").get<std::uint32_t>();
      }
      if (inst.contains("zipf_exponent")) {
        spec.instance.coverage.zipf_exponent =
            inst.at("zipf_exponent").get<double>();
      }
      if (inst.contains("k")) {
        spec.instance.gen_k = inst.at("k").get<std::uint32_t>();
      }
      if (inst.contains("t")) {
        spec.instance.gen_t = inst.at("t").get<std::uint32_t>();
      }
      if (inst.contains("value")) {
        spec.instance.gen_value = inst.at("value").get<double>();
      }
      if (inst.contains("v_star")) {
        spec.instance.gen_vstar = inst.at("v_star").get<double>();
      }
    } else {
      throw std::invalid_argument("spec: instance needs 'file' or 'generator'");
    }
  } else if (spec.algorithm != AlgorithmKind::kTightness) {
    throw std::invalid_argument("spec: missing 'instance'");
  }

  if (j.contains("k")) spec.k = j.at("k").get<std::uint32_t>();
  if (j.contains("t")) spec.t = j.at("t").get<std::uint32_t>();
  if (j.contains("eps")) spec.eps = j.at("eps").get<double>();
  if (j.contains("c_large")) spec.c_large = j.at("c_large").get<std::uint32_t>();
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_array()) {
      spec.seeds = s.get<std::vector<std::uint64_t>>();
    } else {
      spec.seed_count = s.get<std::uint32_t>();
    }
  }
  if (j.contains("opt")) {
    const auto& o = j.at("opt");
    if (o.is_number()) {
      spec.opt_mode = OptMode::kProvided;
      spec.opt_value = o.get<double>();
    } else {
      std::string mode = o.get<std::string>();
      if (mode == "bruteforce") {
        spec.opt_mode = OptMode::kBruteForce;
      } else if (mode == "none") {
        spec.opt_mode = OptMode::kNone;
      } else {
        throw std::invalid_argument("spec: opt must be bruteforce|none|<num>");
      }
    }
  }
  if (j.contains("enumeration_cap")) {
    spec.enumeration_cap = j.at("enumeration_cap").get<double>();
  }
  if (j.contains("cluster")) {
    const auto& c = j.at("cluster");
    if (c.contains("m")) spec.machines_override = c.at("m").get<std::uint32_t>();
    if (c.contains("p")) spec.sample_prob_override = c.at("p").get<double>();
    if (c.contains("budget_regular")) {
      spec.budget_regular_override = c.at("budget_regular").get<std::uint64_t>();
    }
    if (c.contains("budget_central")) {
      spec.budget_central_override = c.at("budget_central").get<std::uint64_t>();
    }
    if (c.contains("c1")) spec.c1 = c.at("c1").get<double>();
    if (c.contains("c2")) spec.c2 = c.at("c2").get<double>();
    if (c.contains("enforcement")) {
      spec.enforcement =
          enforcement_from_name(c.at("enforcement").get<std::string>());
    }
  }
  if (j.contains("count_distribution_round")) {
    spec.count_distribution_round = j.at("count_distribution_round").get<bool>();
  }
  if (j.contains("threads")) spec.threads = j.at("threads").get<std::uint32_t>();
  return spec;
}

inline std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out << "seed,value,opt,ratio,ratio_vs_greedy,rounds,max_central_load,"
         "oracle_calls,budget_violations,error\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << format_double(r.value) << ','
        << detail::csv_field(r.opt) << ',' << detail::csv_field(r.ratio) << ','
        << detail::csv_field(r.ratio_vs_greedy) << ',' << r.rounds << ','
        << r.max_central_load << ',' << r.oracle_calls << ','
        << r.budget_violations << ',' << detail::csv_sanitize(r.error)
        << '\n';
  }
  return out.str();
}

inline nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["spec"] = {
      {"algorithm", algorithm_name(spec.algorithm)},
      {"k", spec.k},
      {"t", spec.t},
      {"eps", spec.eps},
      {"c_large", spec.c_large},
      {"seeds", spec.seeds},
      {"enforcement", to_string(spec.enforcement)},
      {"count_distribution_round", spec.count_distribution_round},
  };
  if (!spec.instance.file.empty()) {
    j["spec"]["instance"] = {{"file", spec.instance.file}};
  } else {
    j["spec"]["instance"] = {{"generator", spec.instance.generator}};
  }
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["seed"] = r.seed;
    row["value"] = r.value;
    if (r.opt) row["opt"] = *r.opt;
    if (r.ratio) row["ratio"] = *r.ratio;
    if (r.ratio_vs_greedy) row["ratio_vs_greedy"] = *r.ratio_vs_greedy;
    row["rounds"] = r.rounds;
    row["max_central_load"] = r.max_central_load;
    row["oracle_calls"] = r.oracle_calls;
    row["budget_violations"] = r.budget_violations;
    if (!r.error.empty()) row["error"] = r.error;
    row["wall_ms"] = r.wall_ms;
    nlohmann::json ledger = nlohmann::json::array();
    for (const auto& round : r.ledger.rounds) {
      nlohmann::json lr;
      for (const auto& m : round.per_machine) {
        lr["received"].push_back(m.received);
        lr["sent"].push_back(m.sent);
        lr["oracle_calls"].push_back(m.oracle_calls);
      }
      ledger.push_back(std::move(lr));
    }
    row["ledger"] = std::move(ledger);
    j["rows"].push_back(std::move(row));
  }
  j["aggregates"] = {
      {"min_ratio", min_ratio()},
      {"mean_ratio", mean_ratio()},
      {"violation_rate", violation_rate()},
  };
  return j;
}

}  // namespace submr

#endif  // SUBMR_EXPERIMENT_HPP_
