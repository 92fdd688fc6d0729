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

#ifndef SUBMR_ADVERSARIAL_HPP_
#define SUBMR_ADVERSARIAL_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submr/algorithms.hpp"
#include "submr/greedy.hpp"
#include "submr/oracle.hpp"

namespace submr {

/// Worst-case instance for a t-level threshold schedule. The ground set
/// holds k "optimal" elements worth v_star each, preceded by levels of
/// decoys: level l has enough decoys of value just above alpha_l that
/// consuming them drives the optimal elements' marginals strictly below
/// alpha_l. A threshold run that scans decoys first therefore fills up
/// on decoys and cannot beat 1 - (t/(t+1))^t.
///
/// Two departures from the idealized construction keep the realization
/// robust under the >= acceptance rule and floating point:
///   - decoy values carry a relative bump of kDecoyBump above alpha_l,
///     so decoys clear their own threshold despite rounding noise;
///   - level counts are floor((alpha_{l-1}/alpha_l - 1) k) + 1, one
///     more than the exact fraction, so the optimal elements land
///     strictly below the threshold instead of exactly on it.
/// Both shift the achieved ratio by at most t * alpha_1 / (k v_star).
struct AdversarialInstance {
  static constexpr double kDecoyBump = 1e-9;

  std::uint32_t k = 1;
  double v_star = 1.0;                // alpha_0
  std::vector<double> thresholds;     // alpha_1 >= ... >= alpha_t > 0
  std::vector<std::uint32_t> counts;  // decoys per level

  std::uint32_t t() const {
    return static_cast<std::uint32_t>(thresholds.size());
  }

  std::uint32_t decoy_count() const {
    std::uint32_t total = 0;
    for (auto c : counts) total += c;
    return total;
  }

  // Ids [0, decoy_count()) are decoys laid out level by level in
  // ascending id order; ids [decoy_count(), ground_n()) are optimal.
  std::uint32_t ground_n() const { return decoy_count() + k; }

  double decoy_value(std::uint32_t level_1based) const {
    return thresholds[level_1based - 1] * (1.0 + kDecoyBump);
  }

  double total_decoy_value() const {
    double total = 0.0;
    for (std::uint32_t l = 1; l <= t(); ++l) {
      total += counts[l - 1] * decoy_value(l);
    }
    return total;
  }

  static AdversarialInstance from_levels(std::uint32_t k, double v_star,
                                         std::vector<double> thresholds,
                                         std::vector<std::uint32_t> counts) {
    if (k == 0 || v_star <= 0.0) {
      throw std::invalid_argument("adversarial: k and v_star must be > 0");
    }
    if (thresholds.empty() || thresholds.size() != counts.size()) {
      throw std::invalid_argument(
          "adversarial: need one count per threshold level");
    }
    double prev = v_star;
    for (double a : thresholds) {
      if (a <= 0.0 || a > prev) {
        throw std::invalid_argument(
            "adversarial: thresholds must satisfy v_star >= a_1 >= ... > 0");
      }
      prev = a;
    }
    AdversarialInstance inst;
    inst.k = k;
    inst.v_star = v_star;
    inst.thresholds = std::move(thresholds);
    inst.counts = std::move(counts);
    if (inst.total_decoy_value() > k * v_star) {
      throw std::invalid_argument(
          "adversarial: total decoy value exceeds k * v_star");
    }
    return inst;
  }

  // Geometric schedule alpha_l = (1 - 1/(t+1))^l v_star, the schedule
  // the distributed algorithms use.
  static AdversarialInstance geometric(std::uint32_t t, std::uint32_t k,
                                       double v_star = 1.0) {
    if (t < 1) throw std::invalid_argument("adversarial: t must be >= 1");
    ThresholdSchedule s =
        ThresholdSchedule::geometric(t, k * v_star, k);  // per-element levels
    std::vector<std::uint32_t> counts(t);
    double prev = v_star;
    for (std::uint32_t l = 1; l <= t; ++l) {
      double exact = (prev / s.levels[l - 1] - 1.0) * k;
      counts[l - 1] = static_cast<std::uint32_t>(std::floor(exact)) + 1;
      prev = s.levels[l - 1];
    }
    return from_levels(k, v_star, std::move(s.levels), std::move(counts));
  }
};

/// Oracle for f(S' u O') = sum_{i in S'} v_i
///                       + (1 - sum_{i in S'} v_i / (k v*)) |O'| v*,
/// with S' the decoys and O' the optimal elements of the instance.
class AdversarialOracle final : public SubmodularOracle {
 public:
  explicit AdversarialOracle(AdversarialInstance instance)
      : inst_(std::move(instance)) {
    ground_.n = inst_.ground_n();
    decoy_values_.reserve(inst_.decoy_count());
    for (std::uint32_t l = 1; l <= inst_.t(); ++l) {
      for (std::uint32_t i = 0; i < inst_.counts[l - 1]; ++i) {
        decoy_values_.push_back(inst_.decoy_value(l));
      }
    }
  }

  const GroundSet& ground() const override { return ground_; }

  std::unique_ptr<SubmodularOracle> clone() const override {
    return std::make_unique<AdversarialOracle>(inst_);
  }

  const AdversarialInstance& instance() const { return inst_; }

  bool is_decoy(ElementId e) const { return e < decoy_values_.size(); }

  double decoy_value_of(ElementId e) const { return decoy_values_.at(e); }

 protected:
  double value_of(std::span<const ElementId> s) const override {
    seen_.begin(ground_.n);
    double decoy_weight = 0.0;
    std::uint32_t optimal = 0;
    for (ElementId e : s) {
      if (!seen_.insert(e)) continue;
      if (is_decoy(e)) {
        decoy_weight += decoy_values_[e];
      } else {
        ++optimal;
      }
    }
    const double capacity = inst_.k * inst_.v_star;
    return decoy_weight +
           (1.0 - decoy_weight / capacity) * optimal * inst_.v_star;
  }

 private:
  AdversarialInstance inst_;
  std::vector<double> decoy_values_;
  GroundSet ground_;
  static thread_local StampSet seen_;
};

inline thread_local StampSet AdversarialOracle::seen_;

inline std::unique_ptr<SubmodularOracle> adversarial_oracle(
    const AdversarialInstance& instance) {
  return std::make_unique<AdversarialOracle>(instance);
}

struct TightnessLevel {
  double threshold = 0.0;
  std::uint32_t picked_after = 0;  // |G| once the level finished
  double value_after = 0.0;
  double decoy_weight_after = 0.0;
};

struct TightnessResult {
  double optimum = 0.0;  // k * v_star
  double ratio = 0.0;    // f(G) / optimum
  double bound = 0.0;    // 1 - (t/(t+1))^t
  PartialSolution solution;
  std::vector<TightnessLevel> levels;
};

/// Runs the sequential t-level thresholding process on the adversarial
/// instance, scanning decoys before optimal elements at every level
/// (the adversary controls arrival order), and reports the achieved
/// fraction of OPT = k v_star. The ratio approaches 1 - (t/(t+1))^t
/// from above as k grows.
inline TightnessResult tightness_experiment(std::uint32_t t, std::uint32_t k,
                                            double v_star = 1.0) {
  AdversarialInstance inst = AdversarialInstance::geometric(t, k, v_star);
  AdversarialOracle oracle(inst);
  // Ascending id order is the adversarial order by construction: level
  // 1 decoys, level 2 decoys, ..., then the optimal elements.
  std::vector<ElementId> order = all_elements(oracle.ground());

  TightnessResult result;
  result.optimum = k * v_star;
  result.bound = threshold_approximation_bound(t);
  result.levels.reserve(t);

  PartialSolution g = empty_solution(oracle, k);
  for (std::uint32_t l = 1; l <= t; ++l) {
    const double alpha = inst.thresholds[l - 1];
    g = threshold_greedy(oracle, order, std::move(g), alpha);
    TightnessLevel snapshot;
    snapshot.threshold = alpha;
    snapshot.picked_after = g.size();
    snapshot.value_after = g.value;
    for (ElementId e : g.elements) {
      if (oracle.is_decoy(e)) {
        snapshot.decoy_weight_after += oracle.decoy_value_of(e);
      }
    }
    result.levels.push_back(snapshot);
  }
  result.solution = std::move(g);
  result.ratio = result.solution.value / result.optimum;
  return result;
}

}  // namespace submr

#endif  // SUBMR_ADVERSARIAL_HPP_
