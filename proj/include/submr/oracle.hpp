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

#ifndef SUBMR_ORACLE_HPP_
#define SUBMR_ORACLE_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "submr/rng.hpp"

namespace submr {

using ElementId = std::uint32_t;

// The universe V = {0, ..., n-1}.
struct GroundSet {
  std::uint32_t n = 0;

  bool contains(ElementId e) const { return e < n; }
};

// Duplicate filter over dense ids. begin() starts a fresh pass without
// clearing the stamp array, so repeated use costs O(inserted) per pass.
class StampSet {
 public:
  void begin(std::size_t n) {
    if (stamps_.size() < n) stamps_.resize(n, 0);
    ++epoch_;
  }
  bool insert(std::uint32_t id) {
    if (stamps_[id] == epoch_) return false;
    stamps_[id] = epoch_;
    return true;
  }

 private:
  std::vector<std::uint64_t> stamps_;
  std::uint64_t epoch_ = 0;
};

/// Evaluation interface for a monotone submodular set function
/// f : 2^V -> R+. Implementations are immutable after construction;
/// only the call counter mutates, and it is safe to bump from
/// concurrently simulated machines. Every public evaluation charges
/// exactly one oracle call.
class SubmodularOracle {
 public:
  virtual ~SubmodularOracle() = default;

  double evaluate(std::span<const ElementId> s) const {
    for (ElementId e : s) {
      if (!ground().contains(e)) {
        throw std::invalid_argument("oracle: element id " + std::to_string(e) +
                                    " out of range [0, " +
                                    std::to_string(ground().n) + ")");
      }
    }
    calls_.fetch_add(1, std::memory_order_relaxed);
    return value_of(s);
  }

  double evaluate(const std::vector<ElementId>& s) const {
    return evaluate(std::span<const ElementId>(s));
  }

  // f_S(e) = f(S u {e}) - f(S). Two oracle calls.
  double marginal(std::span<const ElementId> s, ElementId e) const {
    return marginal_given(s, evaluate(s), e);
  }

  // Marginal when f(S) is already known to the caller; one oracle call.
  double marginal_given(std::span<const ElementId> s, double value_of_s,
                        ElementId e) const {
    std::vector<ElementId> extended;
    extended.reserve(s.size() + 1);
    extended.assign(s.begin(), s.end());
    extended.push_back(e);
    return evaluate(extended) - value_of_s;
  }

  virtual const GroundSet& ground() const = 0;

  std::uint64_t call_count() const {
    return calls_.load(std::memory_order_relaxed);
  }
  void reset_call_count() const { calls_.store(0, std::memory_order_relaxed); }

  virtual std::unique_ptr<SubmodularOracle> clone() const = 0;

 protected:
  // Value of f on s. s may contain duplicates; implementations must
  // treat it as a set. Pure.
  virtual double value_of(std::span<const ElementId> s) const = 0;

 private:
  mutable std::atomic<std::uint64_t> calls_{0};
};

/// Additive (modular) objective: f(S) = sum of per-element values.
class AdditiveOracle final : public SubmodularOracle {
 public:
  explicit AdditiveOracle(std::vector<double> values)
      : values_(std::move(values)) {
    ground_.n = static_cast<std::uint32_t>(values_.size());
    for (double v : values_) {
      if (v < 0.0) throw std::invalid_argument("additive: negative value");
    }
  }

  const GroundSet& ground() const override { return ground_; }

  std::unique_ptr<SubmodularOracle> clone() const override {
    return std::make_unique<AdditiveOracle>(values_);
  }

  double singleton(ElementId e) const { return values_.at(e); }
  const std::vector<double>& values() const { return values_; }

 protected:
  double value_of(std::span<const ElementId> s) const override {
    seen_.begin(values_.size());
    double total = 0.0;
    for (ElementId e : s) {
      if (seen_.insert(e)) total += values_[e];
    }
    return total;
  }

 private:
  std::vector<double> values_;
  GroundSet ground_;
  static thread_local StampSet seen_;
};

inline thread_local StampSet AdditiveOracle::seen_;

struct ProbeWitness {
  std::vector<ElementId> small_set;  // A
  std::vector<ElementId> big_set;    // B, superset of A
  ElementId element = 0;             // e, outside B
  double marginal_small = 0.0;       // f_A(e)
  double marginal_big = 0.0;         // f_B(e)
  std::string reason;
};

struct ProbeResult {
  bool ok = true;
  std::optional<ProbeWitness> witness;
};

/// Randomized check of the monotone-submodular structure: samples
/// A subset of B and e outside B, and verifies f_A(e) >= f_B(e) >= 0.
/// Violations are reported as a witness, not thrown.
inline ProbeResult probe_structure(const SubmodularOracle& oracle,
                                   std::uint64_t trials, std::uint64_t seed,
                                   double tol = 1e-9) {
  const std::uint32_t n = oracle.ground().n;
  ProbeResult result;
  if (n == 0) return result;
  RngStream rng = named_stream(seed, "probe");

  std::vector<ElementId> big, small;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    // Random B of size < n, random A as a subsample, e outside B.
    big.clear();
    small.clear();
    std::uint32_t target = static_cast<std::uint32_t>(rng.next_below(n));
    double keep = n > 1 ? static_cast<double>(target) / n : 0.0;
    for (ElementId e = 0; e < n; ++e) {
      if (rng.next_bernoulli(keep)) big.push_back(e);
    }
    std::vector<ElementId> outside;
    for (ElementId e = 0; e < n; ++e) {
      if (!std::binary_search(big.begin(), big.end(), e)) outside.push_back(e);
    }
    if (outside.empty()) continue;
    ElementId e = outside[rng.next_below(outside.size())];
    for (ElementId b : big) {
      if (rng.next_bernoulli(0.5)) small.push_back(b);
    }

    double fa = oracle.evaluate(small);
    double fae = oracle.marginal_given(small, fa, e);
    double fb = oracle.evaluate(big);
    double fbe = oracle.marginal_given(big, fb, e);

    if (fbe < -tol || fae < fbe - tol) {
      ProbeWitness w;
      w.small_set = small;
      w.big_set = big;
      w.element = e;
      w.marginal_small = fae;
      w.marginal_big = fbe;
      w.reason = fbe < -tol ? "negative marginal" : "increasing marginal";
      result.ok = false;
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

}  // namespace submr

#endif  // SUBMR_ORACLE_HPP_
