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

#ifndef SUBMR_INSTANCE_IO_HPP_
#define SUBMR_INSTANCE_IO_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "submr/adversarial.hpp"
#include "submr/coverage.hpp"
#include "submr/oracle.hpp"
#include "submr/rng.hpp"

namespace submr {

class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; reparsing yields the same double,
// and identical values always print identically.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

inline double parse_double(const std::string& token) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("bad numeric token '" + token + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(const std::string& token) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("bad integer token '" + token + "'");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Instance file formats. Three kinds, distinguished by the header word:
//
//   coverage <n_elements> <universe_size>
//   <element_id>: <point_id> <point_id> ...        (one line per element)
//   weights: <w_0> <w_1> ... <w_{U-1}>              (optional, last line)
//
//   additive <n_elements>
//   values: <v_0> <v_1> ... <v_{n-1}>
//
//   adversarial <t> <k> <v_star>
// ---------------------------------------------------------------------------

struct ParsedInstance {
  std::string kind;  // header word
  std::unique_ptr<SubmodularOracle> oracle;
};

inline std::string serialize_coverage(const CoverageInstance& inst) {
  std::ostringstream out;
  out << "coverage " << inst.sets.size() << ' ' << inst.universe_size << '\n';
  for (std::size_t e = 0; e < inst.sets.size(); ++e) {
    out << e << ':';
    for (PointId p : inst.sets[e]) out << ' ' << p;
    out << '\n';
  }
  if (!inst.weights.empty()) {
    out << "weights:";
    for (double w : inst.weights) out << ' ' << format_double(w);
    out << '\n';
  }
  return out.str();
}

inline std::string serialize_additive(const std::vector<double>& values) {
  std::ostringstream out;
  out << "additive " << values.size() << '\n';
  out << "values:";
  for (double v : values) out << ' ' << format_double(v);
  out << '\n';
  return out.str();
}

inline std::string serialize_adversarial(std::uint32_t t, std::uint32_t k,
                                         double v_star) {
  std::ostringstream out;
  out << "adversarial " << t << ' ' << k << ' ' << format_double(v_star)
      << '\n';
  return out.str();
}

inline ParsedInstance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.empty()) {
    throw ParseError("instance: missing header line");
  }
  std::istringstream head(header);
  std::string kind;
  head >> kind;

  ParsedInstance out;
  out.kind = kind;

  if (kind == "coverage") {
    std::uint64_t n = 0, universe = 0;
    if (!(head >> n >> universe)) {
      throw ParseError("coverage: header must be 'coverage <n> <universe>'");
    }
    CoverageInstance inst;
    inst.universe_size = static_cast<std::uint32_t>(universe);
    inst.sets.assign(n, {});
    std::vector<bool> seen(n, false);
    std::string line;
    std::size_t elements_read = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string first;
      ls >> first;
      if (first == "weights:") {
        double w;
        while (ls >> w) inst.weights.push_back(w);
        if (inst.weights.size() != universe) {
          throw ParseError("coverage: weights line must list " +
                           std::to_string(universe) + " weights");
        }
        continue;
      }
      if (first.empty() || first.back() != ':') {
        throw ParseError("coverage: expected '<id>:' line, got '" + line +
                         "'");
      }
      std::uint64_t id = parse_u64(first.substr(0, first.size() - 1));
      if (id >= n) {
        throw ParseError("coverage: element id " + std::to_string(id) +
                         " out of range");
      }
      if (seen[id]) {
        throw ParseError("coverage: duplicate element id " +
                         std::to_string(id));
      }
      seen[id] = true;
      ++elements_read;
      std::uint64_t p;
      while (ls >> p) {
        inst.sets[id].push_back(static_cast<PointId>(p));
      }
      if (!ls.eof()) {
        throw ParseError("coverage: bad point id on line '" + line + "'");
      }
    }
    if (elements_read != n) {
      throw ParseError("coverage: expected " + std::to_string(n) +
                       " element lines, got " + std::to_string(elements_read));
    }
    out.oracle = std::make_unique<CoverageOracle>(std::move(inst));
    return out;
  }

  if (kind == "additive") {
    std::uint64_t n = 0;
    if (!(head >> n)) {
      throw ParseError("additive: header must be 'additive <n>'");
    }
    std::string line;
    if (!std::getline(in, line)) {
      throw ParseError("additive: missing values line");
    }
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first != "values:") {
      throw ParseError("additive: expected 'values:' line");
    }
    std::vector<double> values;
    double v;
    while (ls >> v) values.push_back(v);
    if (values.size() != n) {
      throw ParseError("additive: expected " + std::to_string(n) +
                       " values, got " + std::to_string(values.size()));
    }
    out.oracle = std::make_unique<AdditiveOracle>(std::move(values));
    return out;
  }

  if (kind == "adversarial") {
    std::uint64_t t = 0, k = 0;
    std::string v_star_token;
    if (!(head >> t >> k >> v_star_token)) {
      throw ParseError("adversarial: header must be 'adversarial <t> <k> <v*>'");
    }
    double v_star = parse_double(v_star_token);
    out.oracle = std::make_unique<AdversarialOracle>(
        AdversarialInstance::geometric(static_cast<std::uint32_t>(t),
                                       static_cast<std::uint32_t>(k), v_star));
    return out;
  }

  throw ParseError("instance: unknown kind '" + kind + "'");
}

inline ParsedInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str());
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream outfile(path, std::ios::binary);
  if (!outfile) throw std::runtime_error("cannot write file '" + path + "'");
  outfile << content;
}

// ---------------------------------------------------------------------------
// Seeded instance generators.
// ---------------------------------------------------------------------------

struct RandomCoverageParams {
  std::uint32_t n = 100;
  std::uint32_t universe = 0;  // 0 means 2n
  std::uint32_t max_set_size = 10;
  double zipf_exponent = 2.0;  // set sizes ~ Zipf over {1..max_set_size}
};

inline CoverageInstance make_random_coverage(const RandomCoverageParams& params,
                                             std::uint64_t seed) {
  if (params.n == 0) throw std::invalid_argument("random-coverage: n == 0");
  CoverageInstance inst;
  inst.universe_size = params.universe ? params.universe : 2 * params.n;
  inst.sets.assign(params.n, {});

  const std::uint32_t smax =
      std::min(std::max<std::uint32_t>(1, params.max_set_size),
               inst.universe_size);
  std::vector<double> size_cdf(smax);
  double total = 0.0;
  for (std::uint32_t s = 1; s <= smax; ++s) {
    total += std::pow(static_cast<double>(s), -params.zipf_exponent);
    size_cdf[s - 1] = total;
  }

  RngStream rng = named_stream(seed, "coverage-gen");
  StampSet chosen;
  for (auto& set : inst.sets) {
    double u = rng.next_unit() * total;
    std::uint32_t size = 1;
    while (size < smax && size_cdf[size - 1] < u) ++size;
    chosen.begin(inst.universe_size);
    while (set.size() < size) {
      PointId p = static_cast<PointId>(rng.next_below(inst.universe_size));
      if (chosen.insert(p)) set.push_back(p);
    }
  }
  return inst;
}

// k planted elements of singleton value 1 hidden among n - k elements
// of value 1/n, positions chosen by the seed.
inline std::vector<double> make_planted_sparse(std::uint32_t n,
                                               std::uint32_t k,
                                               std::uint64_t seed) {
  if (k > n) throw std::invalid_argument("planted-sparse: k > n");
  std::vector<double> values(n, 1.0 / n);
  std::vector<ElementId> ids(n);
  for (std::uint32_t i = 0; i < n; ++i) ids[i] = i;
  RngStream rng = named_stream(seed, "planted-gen");
  rng.shuffle(ids);
  for (std::uint32_t i = 0; i < k; ++i) values[ids[i]] = 1.0;
  return values;
}

inline std::vector<double> make_uniform_additive(std::uint32_t n,
                                                 double value = 1.0) {
  return std::vector<double>(n, value);
}

}  // namespace submr

#endif  // SUBMR_INSTANCE_IO_HPP_
