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

#ifndef SUBMR_GREEDY_HPP_
#define SUBMR_GREEDY_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "submr/oracle.hpp"

namespace submr {

/// A partial greedy solution G with |G| <= k. Elements are stored in
/// selection order together with the marginal each insertion paid, so
/// value lower bounds can be audited after the fact. `value` tracks
/// f(G) incrementally.
struct PartialSolution {
  std::vector<ElementId> elements;
  std::vector<double> insertion_marginals;
  double value = 0.0;
  std::uint32_t k = 0;

  std::uint32_t size() const {
    return static_cast<std::uint32_t>(elements.size());
  }
  bool full() const { return size() >= k; }
  bool contains(ElementId e) const {
    return std::find(elements.begin(), elements.end(), e) != elements.end();
  }

  void add(ElementId e, double marginal) {
    elements.push_back(e);
    insertion_marginals.push_back(marginal);
    value += marginal;
  }
};

// Empty solution with cached f(empty). Costs one oracle call.
inline PartialSolution empty_solution(const SubmodularOracle& f,
                                      std::uint32_t k) {
  PartialSolution g;
  g.k = k;
  g.value = f.evaluate(std::span<const ElementId>{});
  return g;
}

/// Scans `scan` in the given order, adding every element whose marginal
/// with respect to the running solution is at least `tau`, until the
/// cardinality bound is hit. On return, either the solution is full or
/// every scanned element has marginal below tau. One oracle call per
/// scanned element.
inline PartialSolution threshold_greedy(const SubmodularOracle& f,
                                        std::span<const ElementId> scan,
                                        PartialSolution g, double tau) {
  for (ElementId e : scan) {
    if (g.full()) break;
    if (g.contains(e)) continue;
    double marginal = f.marginal_given(g.elements, g.value, e);
    if (marginal >= tau) g.add(e, marginal);
  }
  return g;
}

/// Returns { e in s : f_G(e) >= tau }, preserving the order of s.
/// G is not modified. One oracle call per element of s.
inline std::vector<ElementId> threshold_filter(const SubmodularOracle& f,
                                               std::span<const ElementId> s,
                                               const PartialSolution& g,
                                               double tau) {
  std::vector<ElementId> kept;
  for (ElementId e : s) {
    if (f.marginal_given(g.elements, g.value, e) >= tau) kept.push_back(e);
  }
  return kept;
}

/// Classical greedy: repeatedly adds the element of maximum marginal,
/// ties broken by smallest id, until k elements are chosen or no
/// marginal is positive.
inline PartialSolution sequential_greedy(const SubmodularOracle& f,
                                         std::span<const ElementId> universe,
                                         std::uint32_t k) {
  PartialSolution g = empty_solution(f, k);
  while (!g.full()) {
    double best = 0.0;
    ElementId best_e = 0;
    bool found = false;
    for (ElementId e : universe) {
      if (g.contains(e)) continue;
      double marginal = f.marginal_given(g.elements, g.value, e);
      if (marginal > best) {
        best = marginal;
        best_e = e;
        found = true;
      }
    }
    if (!found) break;
    g.add(best_e, best);
  }
  return g;
}

struct BruteForceResult {
  double value = 0.0;
  std::vector<ElementId> witness;
};

inline double binomial_estimate(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (result > 1e18) return 1e18;
  }
  return result;
}

/// Exact optimum over subsets of `universe` of size at most k, by
/// exhaustive enumeration of size-exactly-min(k, n) subsets (monotone
/// objectives gain nothing from smaller ones). Refuses when the subset
/// count exceeds `enumeration_cap`.
inline BruteForceResult brute_force_opt(const SubmodularOracle& f,
                                        std::span<const ElementId> universe,
                                        std::uint32_t k,
                                        double enumeration_cap = 1e7) {
  const std::uint32_t n = static_cast<std::uint32_t>(universe.size());
  const std::uint32_t pick = std::min(k, n);
  BruteForceResult result;
  if (pick == 0) {
    result.value = f.evaluate(std::span<const ElementId>{});
    return result;
  }
  double count = binomial_estimate(n, pick);
  if (count > enumeration_cap) {
    throw std::length_error("brute_force_opt: C(" + std::to_string(n) + ", " +
                            std::to_string(pick) + ") exceeds enumeration cap");
  }

  std::vector<std::uint32_t> idx(pick);
  for (std::uint32_t i = 0; i < pick; ++i) idx[i] = i;
  std::vector<ElementId> subset(pick);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    for (std::uint32_t i = 0; i < pick; ++i) subset[i] = universe[idx[i]];
    double v = f.evaluate(subset);
    if (v > best) {
      best = v;
      result.witness = subset;
    }
    // Advance to the next size-`pick` combination in lexicographic order.
    std::int64_t i = pick - 1;
    while (i >= 0 && idx[i] == n - pick + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < pick; ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
  result.value = best;
  return result;
}

// Ascending ids 0..n-1; the default scan order everywhere.
inline std::vector<ElementId> all_elements(const GroundSet& ground) {
  std::vector<ElementId> v(ground.n);
  for (std::uint32_t i = 0; i < ground.n; ++i) v[i] = i;
  return v;
}

}  // namespace submr

#endif  // SUBMR_GREEDY_HPP_
