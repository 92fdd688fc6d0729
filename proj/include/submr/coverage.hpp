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

#ifndef SUBMR_COVERAGE_HPP_
#define SUBMR_COVERAGE_HPP_

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submr/oracle.hpp"

namespace submr {

using PointId = std::uint32_t;

/// Weighted coverage instance: element e covers a subset of universe
/// points, f(S) = total weight of the union of the covered subsets.
/// Unweighted instances use weight 1 per point.
struct CoverageInstance {
  std::vector<std::vector<PointId>> sets;  // indexed by element id
  std::uint32_t universe_size = 0;
  std::vector<double> weights;  // empty means all-ones

  void validate() const {
    for (const auto& set : sets) {
      for (PointId p : set) {
        if (p >= universe_size) {
          throw std::invalid_argument("coverage: point id " +
                                      std::to_string(p) + " out of range");
        }
      }
    }
    if (!weights.empty() && weights.size() != universe_size) {
      throw std::invalid_argument("coverage: weights length != universe size");
    }
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("coverage: negative weight");
    }
  }

  double point_weight(PointId p) const {
    return weights.empty() ? 1.0 : weights[p];
  }
};

class CoverageOracle final : public SubmodularOracle {
 public:
  explicit CoverageOracle(CoverageInstance instance)
      : instance_(std::make_shared<const CoverageInstance>(std::move(instance))) {
    instance_->validate();
    ground_.n = static_cast<std::uint32_t>(instance_->sets.size());
  }

  const GroundSet& ground() const override { return ground_; }

  std::unique_ptr<SubmodularOracle> clone() const override {
    return std::unique_ptr<SubmodularOracle>(new CoverageOracle(instance_));
  }

  const CoverageInstance& instance() const { return *instance_; }

 protected:
  double value_of(std::span<const ElementId> s) const override {
    const CoverageInstance& inst = *instance_;
    seen_points_.begin(inst.universe_size);
    covered_.clear();
    for (ElementId e : s) {
      for (PointId p : inst.sets[e]) {
        if (seen_points_.insert(p)) covered_.push_back(p);
      }
    }
    // Weights accumulate in universe-id ascending order so the sum is
    // independent of the order elements were listed in.
    std::sort(covered_.begin(), covered_.end());
    double total = 0.0;
    for (PointId p : covered_) total += inst.point_weight(p);
    return total;
  }

 private:
  explicit CoverageOracle(std::shared_ptr<const CoverageInstance> shared)
      : instance_(std::move(shared)) {
    ground_.n = static_cast<std::uint32_t>(instance_->sets.size());
  }

  std::shared_ptr<const CoverageInstance> instance_;
  GroundSet ground_;
  static thread_local StampSet seen_points_;
  static thread_local std::vector<PointId> covered_;
};

inline thread_local StampSet CoverageOracle::seen_points_;
inline thread_local std::vector<PointId> CoverageOracle::covered_;

}  // namespace submr

#endif  // SUBMR_COVERAGE_HPP_
