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

#ifndef SUBMR_TESTS_TEST_SUPPORT_HPP_
#define SUBMR_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "submr/coverage.hpp"
#include "submr/oracle.hpp"
#include "submr/rng.hpp"

namespace submr::testing {

// Independent reference for coverage values on universes up to 64
// points: per-element bitmasks, value = total weight of the OR.
class BitmaskCoverageRef {
 public:
  BitmaskCoverageRef(const CoverageInstance& inst) {
    masks_.reserve(inst.sets.size());
    for (const auto& set : inst.sets) {
      std::uint64_t m = 0;
      for (PointId p : set) m |= (1ULL << p);
      masks_.push_back(m);
    }
    for (std::uint32_t p = 0; p < inst.universe_size; ++p) {
      weights_.push_back(inst.point_weight(p));
    }
  }

  double value(std::span<const ElementId> s) const {
    std::uint64_t m = 0;
    for (ElementId e : s) m |= masks_[e];
    double total = 0.0;
    for (std::uint32_t p = 0; p < weights_.size(); ++p) {
      if (m & (1ULL << p)) total += weights_[p];
    }
    return total;
  }

 private:
  std::vector<std::uint64_t> masks_;
  std::vector<double> weights_;
};

// Deliberately invalid objective: f(S) = -|S|.
class BrokenOracle final : public SubmodularOracle {
 public:
  explicit BrokenOracle(std::uint32_t n) { ground_.n = n; }

  const GroundSet& ground() const override { return ground_; }

  std::unique_ptr<SubmodularOracle> clone() const override {
    return std::make_unique<BrokenOracle>(ground_.n);
  }

 protected:
  double value_of(std::span<const ElementId> s) const override {
    return -static_cast<double>(s.size());
  }

 private:
  GroundSet ground_;
};

inline CoverageInstance random_coverage_small(std::uint32_t n,
                                              std::uint32_t universe,
                                              std::uint64_t seed,
                                              bool weighted = false) {
  CoverageInstance inst;
  inst.universe_size = universe;
  inst.sets.assign(n, {});
  RngStream rng = named_stream(seed, "test-coverage");
  for (auto& set : inst.sets) {
    std::uint32_t size = 1 + static_cast<std::uint32_t>(rng.next_below(4));
    StampSet seen;
    seen.begin(universe);
    while (set.size() < size) {
      PointId p = static_cast<PointId>(rng.next_below(universe));
      if (seen.insert(p)) set.push_back(p);
    }
  }
  if (weighted) {
    for (std::uint32_t p = 0; p < universe; ++p) {
      inst.weights.push_back(0.25 + rng.next_unit() * 2.0);
    }
  }
  return inst;
}

inline std::vector<double> random_values(std::uint32_t n, std::uint64_t seed,
                                         double scale = 10.0) {
  std::vector<double> values(n);
  RngStream rng = named_stream(seed, "test-values");
  for (auto& v : values) v = rng.next_unit() * scale;
  return values;
}

inline std::vector<ElementId> random_subset(std::uint32_t n, double p,
                                            RngStream& rng) {
  std::vector<ElementId> s;
  for (ElementId e = 0; e < n; ++e) {
    if (rng.next_bernoulli(p)) s.push_back(e);
  }
  return s;
}

}  // namespace submr::testing

#endif  // SUBMR_TESTS_TEST_SUPPORT_HPP_
