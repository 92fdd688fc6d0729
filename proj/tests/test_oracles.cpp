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

#include <stdexcept>
#include <vector>

#include "submr/coverage.hpp"
#include "submr/oracle.hpp"
#include "test_support.hpp"

using namespace submr;
using submr::testing::BitmaskCoverageRef;
using submr::testing::BrokenOracle;

namespace {

CoverageOracle two_set_instance() {
  CoverageInstance inst;
  inst.universe_size = 4;
  inst.sets = {{1, 2}, {2, 3}};
  return CoverageOracle(std::move(inst));
}

}  // namespace

TEST_CASE("coverage evaluation counts the union") {
  CoverageOracle f = two_set_instance();
  std::vector<ElementId> both{0, 1};
  REQUIRE(f.evaluate(both) == Catch::Approx(3.0).margin(1e-9));
  REQUIRE(f.evaluate(std::vector<ElementId>{}) == 0.0);
  REQUIRE(f.evaluate(std::vector<ElementId>{0}) == Catch::Approx(2.0));
}

TEST_CASE("additive evaluation sums distinct values") {
  AdditiveOracle f({5.0, 7.0});
  REQUIRE(f.evaluate(std::vector<ElementId>{0, 1}) == Catch::Approx(12.0));
  // Duplicates in the input act as a set.
  REQUIRE(f.evaluate(std::vector<ElementId>{0, 0, 1}) == Catch::Approx(12.0));
}

TEST_CASE("marginals") {
  CoverageOracle f = two_set_instance();
  std::vector<ElementId> s{0};
  SECTION("coverage marginal is the union-size difference") {
    REQUIRE(f.marginal(s, 1) == Catch::Approx(1.0).margin(1e-9));
  }
  SECTION("element already in the set has zero marginal") {
    REQUIRE(f.marginal(s, 0) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("additive marginal is the element value") {
    AdditiveOracle add({5.0, 7.0});
    REQUIRE(add.marginal(std::vector<ElementId>{0}, 1) == Catch::Approx(7.0));
  }
}

TEST_CASE("call counting") {
  AdditiveOracle f({1.0, 2.0, 3.0});
  REQUIRE(f.call_count() == 0);
  std::vector<ElementId> s{0, 1};
  f.evaluate(s);
  REQUIRE(f.call_count() == 1);
  f.marginal(s, 2);  // two calls
  REQUIRE(f.call_count() == 3);
  double fs = f.evaluate(s);
  f.marginal_given(s, fs, 2);  // one call (plus the evaluate above)
  REQUIRE(f.call_count() == 5);
  f.reset_call_count();
  REQUIRE(f.call_count() == 0);
}

TEST_CASE("out-of-range element id is an input error") {
  AdditiveOracle f({1.0, 2.0});
  REQUIRE_THROWS_AS(f.evaluate(std::vector<ElementId>{0, 2}),
                    std::invalid_argument);
}

TEST_CASE("negative additive values are rejected") {
  REQUIRE_THROWS_AS(AdditiveOracle({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("coverage instance validation") {
  CoverageInstance inst;
  inst.universe_size = 2;
  inst.sets = {{0, 5}};  // point out of range
  REQUIRE_THROWS_AS(CoverageOracle(std::move(inst)), std::invalid_argument);

  CoverageInstance bad_weights;
  bad_weights.universe_size = 2;
  bad_weights.sets = {{0}};
  bad_weights.weights = {1.0};  // wrong length
  REQUIRE_THROWS_AS(CoverageOracle(std::move(bad_weights)),
                    std::invalid_argument);
}

TEST_CASE("coverage matches the bitmask reference on small universes") {
  RngStream rng = named_stream(11, "cover-vs-mask");
  for (int trial = 0; trial < 50; ++trial) {
    bool weighted = trial % 2 == 1;
    CoverageInstance inst = submr::testing::random_coverage_small(
        12, 24, 1000 + trial, weighted);
    BitmaskCoverageRef ref(inst);
    CoverageOracle f(std::move(inst));
    for (int probe = 0; probe < 20; ++probe) {
      auto s = submr::testing::random_subset(12, rng.next_unit(), rng);
      REQUIRE(f.evaluate(s) == Catch::Approx(ref.value(s)).margin(1e-9));
    }
  }
}

TEST_CASE("probe_structure accepts the shipped oracles") {
  SECTION("coverage") {
    CoverageOracle f(
        submr::testing::random_coverage_small(20, 40, 5, false));
    REQUIRE(probe_structure(f, 1000, 77).ok);
  }
  SECTION("weighted coverage") {
    CoverageOracle f(submr::testing::random_coverage_small(20, 40, 6, true));
    REQUIRE(probe_structure(f, 1000, 78).ok);
  }
  SECTION("additive") {
    AdditiveOracle f(submr::testing::random_values(25, 7));
    REQUIRE(probe_structure(f, 1000, 79).ok);
  }
}

TEST_CASE("probe_structure reports a witness for a broken oracle") {
  BrokenOracle f(10);
  ProbeResult r = probe_structure(f, 1000, 80);
  REQUIRE_FALSE(r.ok);
  REQUIRE(r.witness.has_value());
  REQUIRE(r.witness->marginal_big < 0.0);
}

TEST_CASE("clones share instance data but not call counts") {
  CoverageOracle f = two_set_instance();
  std::vector<ElementId> s{0, 1};
  f.evaluate(s);
  auto copy = f.clone();
  REQUIRE(copy->call_count() == 0);
  REQUIRE(copy->evaluate(s) == Catch::Approx(3.0));
  REQUIRE(f.call_count() == 1);
}
