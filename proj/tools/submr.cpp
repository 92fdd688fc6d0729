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

// submr: experiment runner for distributed threshold-greedy submodular
// maximization on a simulated cluster.
//
//   submr run --instance coverage.txt --alg tworound --k 5 --seeds 25 \
//             --opt bruteforce --format csv
//   submr run --spec experiment.json
//   submr gen --kind random-coverage --n 100 --universe 500 --seed 7 \
//             --out coverage.txt

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "submr/experiment.hpp"
#include "submr/instance_io.hpp"

namespace {

int run_command(const std::string& spec_path, submr::ExperimentSpec spec,
                bool spec_from_flags, const std::string& format,
                const std::string& out_path) {
  using namespace submr;
  ExperimentSpec effective = std::move(spec);
  std::string effective_format = format;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) {
      std::cerr << "error: cannot open spec file '" << spec_path << "'\n";
      return 2;
    }
    nlohmann::json j;
    try {
      in >> j;
      effective = experiment_spec_from_json(j);
    } catch (const std::exception& e) {
      std::cerr << "error: bad spec file: " << e.what() << "\n";
      return 2;
    }
    if (j.contains("format")) {
      effective_format = j.at("format").get<std::string>();
    }
  } else if (!spec_from_flags) {
    std::cerr << "error: pass --spec or describe the experiment with flags\n";
    return 2;
  }

  ExperimentReport report;
  try {
    report = run_experiment(effective);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::string payload = effective_format == "json"
                            ? report.to_json().dump(2) + "\n"
                            : report.to_csv();
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    write_text_file(out_path, payload);
  }

  std::size_t failed = 0;
  for (const auto& r : report.rows) {
    if (!r.error.empty()) ++failed;
  }
  std::cerr << "ran " << report.rows.size() << " trial(s)";
  if (failed) std::cerr << ", " << failed << " failed";
  if (!std::isinf(report.min_ratio())) {
    std::cerr << ", min ratio " << report.min_ratio();
  }
  std::cerr << "\n";
  // Per-trial failures (budget etc.) are reported in the rows; the
  // batch itself completed.
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace submr;

  CLI::App app{"distributed threshold-greedy submodular maximization"};
  app.require_subcommand(1);

  // -------------------------------------------------------------- run
  auto* run = app.add_subcommand("run", "run a batch of seeded trials");
  std::string spec_path, instance_path, gen_kind, alg_name = "greedy";
  std::string opt_arg = "none", format = "csv", enforce = "warn";
  std::string out_path, seed_list;
  ExperimentSpec spec;
  std::uint32_t seeds_count = 1;
  bool count_distribution = false;

  run->add_option("--spec", spec_path, "experiment spec JSON file");
  run->add_option("--instance", instance_path, "instance file path");
  run->add_option("--gen", gen_kind,
                  "generator: random-coverage|planted-sparse|"
                  "uniform-additive|adversarial");
  run->add_option("--n", spec.instance.gen_n, "generator ground-set size");
  run->add_option("--universe", spec.instance.coverage.universe,
                  "coverage universe size (default 2n)");
  run->add_option("--max-set-size", spec.instance.coverage.max_set_size,
                  "coverage per-element set size cap");
  run->add_option("--zipf", spec.instance.coverage.zipf_exponent,
                  "coverage set-size Zipf exponent");
  run->add_option("--gen-k", spec.instance.gen_k,
                  "planted-sparse planted count / adversarial k");
  run->add_option("--gen-t", spec.instance.gen_t, "adversarial level count");
  run->add_option("--value", spec.instance.gen_value,
                  "uniform-additive element value");
  run->add_option("--vstar", spec.instance.gen_vstar,
                  "adversarial optimal-element value");
  run->add_option("--alg", alg_name,
                  "greedy|bruteforce|tworound|multiround|dense|sparse|"
                  "combined|unknownopt|tightness");
  run->add_option("--k", spec.k, "cardinality bound");
  run->add_option("--t", spec.t, "threshold count");
  run->add_option("--eps", spec.eps, "guessing accuracy in (0,1)");
  run->add_option("--c-large", spec.c_large,
                  "sparse routing: forward c*k largest elements");
  run->add_option("--seeds", seeds_count, "number of seeds (1..N)");
  run->add_option("--seed-list", seed_list, "explicit comma-separated seeds");
  run->add_option("--opt", opt_arg, "bruteforce|none|<value>");
  run->add_option("--cap", spec.enumeration_cap, "brute-force enumeration cap");
  run->add_option("--m", spec.machines_override, "override machine count");
  run->add_option("--p", spec.sample_prob_override,
                  "override sampling probability");
  run->add_option("--budget-regular", spec.budget_regular_override,
                  "override per-machine element budget");
  run->add_option("--budget-central", spec.budget_central_override,
                  "override central-machine element budget");
  run->add_option("--c1", spec.c1, "regular budget constant");
  run->add_option("--c2", spec.c2, "central budget constant");
  run->add_option("--enforce", enforce, "budget enforcement: off|warn|fail");
  run->add_option("--threads", spec.threads,
                  "worker threads for the trial batch (0 = all cores)");
  run->add_flag("--count-distribution-round", count_distribution,
                "count data-distribution steps as rounds");
  run->add_option("--format", format, "csv|json");
  run->add_option("--out", out_path, "write the report here instead of stdout");

  // -------------------------------------------------------------- gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  std::string g_kind, g_out;
  std::uint64_t g_seed = 1;
  RandomCoverageParams g_cov;
  std::uint32_t g_k = 10, g_t = 1, g_n = 100;
  double g_value = 1.0, g_vstar = 1.0;
  gen->add_option("--kind", g_kind,
                  "random-coverage|planted-sparse|uniform-additive|adversarial")
      ->required();
  gen->add_option("--out", g_out, "output path")->required();
  gen->add_option("--seed", g_seed, "generator seed");
  gen->add_option("--n", g_n, "ground-set size");
  gen->add_option("--universe", g_cov.universe, "coverage universe size");
  gen->add_option("--max-set-size", g_cov.max_set_size,
                  "coverage per-element set size cap");
  gen->add_option("--zipf", g_cov.zipf_exponent, "set-size Zipf exponent");
  gen->add_option("--k", g_k, "planted count / adversarial k");
  gen->add_option("--t", g_t, "adversarial level count");
  gen->add_option("--value", g_value, "uniform-additive element value");
  gen->add_option("--vstar", g_vstar, "adversarial optimal-element value");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    try {
      std::string text;
      if (g_kind == "random-coverage") {
        g_cov.n = g_n;
        text = serialize_coverage(make_random_coverage(g_cov, g_seed));
      } else if (g_kind == "planted-sparse") {
        text = serialize_additive(make_planted_sparse(g_n, g_k, g_seed));
      } else if (g_kind == "uniform-additive") {
        text = serialize_additive(make_uniform_additive(g_n, g_value));
      } else if (g_kind == "adversarial") {
        AdversarialInstance::geometric(g_t, g_k, g_vstar);  // validates
        text = serialize_adversarial(g_t, g_k, g_vstar);
      } else {
        std::cerr << "error: unknown generator kind '" << g_kind << "'\n";
        return 2;
      }
      write_text_file(g_out, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    return 0;
  }

  // run subcommand
  bool spec_from_flags = !instance_path.empty() || !gen_kind.empty() ||
                         alg_name == "tightness";
  spec.instance.file = instance_path;
  spec.instance.generator = gen_kind;
  spec.instance.coverage.n = spec.instance.gen_n;
  try {
    spec.algorithm = algorithm_from_name(alg_name);
    spec.enforcement = enforcement_from_name(enforce);
    if (opt_arg == "bruteforce") {
      spec.opt_mode = OptMode::kBruteForce;
    } else if (opt_arg == "none") {
      spec.opt_mode = OptMode::kNone;
    } else {
      spec.opt_mode = OptMode::kProvided;
      spec.opt_value = parse_double(opt_arg);
    }
    if (!seed_list.empty()) {
      std::istringstream in(seed_list);
      std::string token;
      while (std::getline(in, token, ',')) {
        if (!token.empty()) spec.seeds.push_back(parse_u64(token));
      }
    } else {
      spec.seed_count = seeds_count;
    }
    spec.count_distribution_round = count_distribution;
    if (format != "csv" && format != "json") {
      std::cerr << "error: --format must be csv or json\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return run_command(spec_path, std::move(spec), spec_from_flags, format,
                     out_path);
}
