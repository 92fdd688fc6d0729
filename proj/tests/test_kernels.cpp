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

#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <stdexcept>
#include <vector>

#include "submr/coverage.hpp"
#include "submr/greedy.hpp"
#include "submr/oracle.hpp"
#include "test_support.hpp"

using namespace submr;

namespace {

std::unique_ptr<SubmodularOracle> random_instance(std::uint64_t seed) {
  if (seed % 2 == 0) {
    return std::make_unique<CoverageOracle>(
        submr::testing::random_coverage_small(10, 20, seed, seed % 4 == 2));
  }
  return std::make_unique<AdditiveOracle>(
      submr::testing::random_values(10, seed));
}

}  // namespace

TEST_CASE("threshold_greedy basics") {
  AdditiveOracle f({10.0, 3.0, 6.0});
  std::vector<ElementId> scan{0, 1, 2};

  SECTION("empty scan leaves the solution unchanged") {
    PartialSolution g = empty_solution(f, 2);
    PartialSolution out =
        threshold_greedy(f, std::vector<ElementId>{}, g, 5.0);
    REQUIRE(out.elements.empty());
    REQUIRE(out.value == 0.0);
  }

  SECTION("keeps elements whose marginal clears the threshold") {
    PartialSolution out =
        threshold_greedy(f, scan, empty_solution(f, 2), 5.0);
    REQUIRE(out.elements == std::vector<ElementId>{0, 2});
    REQUIRE(out.value == Catch::Approx(16.0));
    // Cross-check against exhaustive enumeration.
    REQUIRE(brute_force_opt(f, scan, 2).value == Catch::Approx(16.0));
  }

  SECTION("threshold zero admits everything until full") {
    AdditiveOracle with_zeros({2.0, 0.0, 1.0, 0.0, 5.0});
    std::vector<ElementId> all{0, 1, 2, 3, 4};
    PartialSolution out =
        threshold_greedy(with_zeros, all, empty_solution(with_zeros, 3), 0.0);
    REQUIRE(out.size() == 3);
    REQUIRE(out.elements == std::vector<ElementId>{0, 1, 2});
  }
}

TEST_CASE("threshold_filter basics") {
  AdditiveOracle f({10.0, 3.0, 6.0});
  std::vector<ElementId> s{0, 1, 2};
  PartialSolution g = empty_solution(f, 2);

  SECTION("threshold zero keeps everything") {
    REQUIRE(threshold_filter(f, s, g, 0.0) == s);
  }
  SECTION("exact marginal comparison") {
    REQUIRE(threshold_filter(f, s, g, 5.0) == std::vector<ElementId>{0, 2});
  }
  SECTION("elements of G are filtered out for positive thresholds") {
    PartialSolution holding = threshold_greedy(f, s, g, 5.0);  // {0, 2}
    auto kept = threshold_filter(f, s, holding, 1.0);
    REQUIRE(kept == std::vector<ElementId>{1});
  }
}

TEST_CASE("kernel postconditions hold on random instances") {
  RngStream rng = named_stream(99, "kernel-props");
  int filter_checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto oracle = random_instance(trial);
    const std::uint32_t n = oracle->ground().n;
    std::vector<ElementId> scan = all_elements(oracle->ground());
    rng.shuffle(scan);
    const double tau = rng.next_unit() * 4.0;
    const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.next_below(n));

    PartialSolution g0 = empty_solution(*oracle, k);
    PartialSolution g = threshold_greedy(*oracle, scan, g0, tau);

    // Terminal condition: full, or no scanned element clears tau.
    if (!g.full()) {
      for (ElementId e : scan) {
        REQUIRE(oracle->marginal(g.elements, e) < tau);
      }
    }
    // Insertion-marginal audit: every pick paid at least tau.
    for (double m : g.insertion_marginals) REQUIRE(m >= tau - 1e-12);
    REQUIRE(g.value - g0.value >=
            tau * static_cast<double>(g.size() - g0.size()) - 1e-9);
    // Cached value matches a fresh evaluation.
    REQUIRE(g.value ==
            Catch::Approx(oracle->evaluate(g.elements)).margin(1e-9));
    // Determinism in the scan order.
    PartialSolution again = threshold_greedy(*oracle, scan, g0, tau);
    REQUIRE(again.elements == g.elements);

    // Filter equals the exact marginal test, deciding membership with a
    // two-call marginal on a fresh clone.
    if (trial % 10 == 0) {
      auto filtered = threshold_filter(*oracle, scan, g, tau);
      auto fresh = oracle->clone();
      std::vector<ElementId> expected;
      for (ElementId e : scan) {
        if (fresh->marginal(g.elements, e) >= tau) expected.push_back(e);
      }
      REQUIRE(filtered == expected);
      ++filter_checked;
    }
  }
  REQUIRE(filter_checked == 100);
}

TEST_CASE("sequential greedy") {
  SECTION("additive: top-k values, ties to the smallest id") {
    AdditiveOracle f({5.0, 7.0, 5.0});
    PartialSolution g = sequential_greedy(f, all_elements(f.ground()), 2);
    REQUIRE(g.elements == std::vector<ElementId>{1, 0});
    REQUIRE(g.value == Catch::Approx(12.0));
  }
  SECTION("k >= n selects exactly the positive-marginal elements") {
    AdditiveOracle f({3.0, 0.0, 2.0});
    PartialSolution g = sequential_greedy(f, all_elements(f.ground()), 5);
    REQUIRE(g.elements == std::vector<ElementId>{0, 2});
    REQUIRE(g.value == Catch::Approx(f.evaluate(all_elements(f.ground()))));
  }
  SECTION("reaches (1 - 1/e) OPT on small instances") {
    const double bound = 1.0 - std::exp(-1.0);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto oracle = random_instance(seed);
      auto universe = all_elements(oracle->ground());
      for (std::uint32_t k : {1u, 2u, 3u}) {
        double opt = brute_force_opt(*oracle, universe, k).value;
        PartialSolution g = sequential_greedy(*oracle, universe, k);
        REQUIRE(g.value >= bound * opt - 1e-9);
      }
    }
  }
}

TEST_CASE("brute_force_opt") {
  SECTION("additive: sum of the top-k values") {
    AdditiveOracle f({1.0, 9.0, 4.0, 6.0});
    auto r = brute_force_opt(f, all_elements(f.ground()), 2);
    REQUIRE(r.value == Catch::Approx(15.0));
    REQUIRE(r.witness == std::vector<ElementId>{1, 3});
  }
  SECTION("coverage example, value fixed by enumeration") {
    CoverageInstance inst;
    inst.universe_size = 5;
    inst.sets = {{1, 2}, {2, 3}, {4}};
    CoverageOracle f(std::move(inst));
    auto r = brute_force_opt(f, all_elements(f.ground()), 2);
    // All three pairs cover exactly 3 points; 4 needs all k=3 sets.
    REQUIRE(r.value == Catch::Approx(3.0));
    REQUIRE(brute_force_opt(f, all_elements(f.ground()), 3).value ==
            Catch::Approx(4.0));
  }
  SECTION("k = 0 returns f(empty)") {
    AdditiveOracle f({1.0, 2.0});
    REQUIRE(brute_force_opt(f, all_elements(f.ground()), 0).value == 0.0);
  }
  SECTION("refuses when the enumeration cap is exceeded") {
    AdditiveOracle f(submr::testing::random_values(30, 3));
    REQUIRE_THROWS_AS(
        brute_force_opt(f, all_elements(f.ground()), 15, 1000.0),
        std::length_error);
  }
}

TEST_CASE("threshold at opt/(2k) halves the optimum sequentially") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto oracle = random_instance(seed + 500);
    auto universe = all_elements(oracle->ground());
    for (std::uint32_t k : {1u, 2u, 3u}) {
      double opt = brute_force_opt(*oracle, universe, k).value;
      if (opt <= 0.0) continue;
      PartialSolution g = threshold_greedy(
          *oracle, universe, empty_solution(*oracle, k), opt / (2.0 * k));
      REQUIRE(g.value >= opt / 2.0 - 1e-9);
    }
  }
}
