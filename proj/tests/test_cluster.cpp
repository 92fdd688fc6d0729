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

#include <cmath>
#include <set>
#include <vector>

#include "submr/cluster.hpp"
#include "submr/rng.hpp"

using namespace submr;

TEST_CASE("named streams are independent and deterministic") {
  RngStream a1 = named_stream(42, "alpha");
  RngStream a2 = named_stream(42, "alpha");
  RngStream b = named_stream(42, "beta");
  std::uint64_t first_a = a1.next_u64();
  // Drawing from beta never perturbs alpha.
  for (int i = 0; i < 100; ++i) b.next_u64();
  REQUIRE(a2.next_u64() == first_a);
  REQUIRE(named_stream(42, "alpha", 1).next_u64() != first_a);
  REQUIRE(named_stream(43, "alpha").next_u64() != first_a);
}

TEST_CASE("cluster config defaults follow the square-root regime") {
  ClusterConfig cfg = ClusterConfig::with_defaults(10000, 100, 7);
  REQUIRE(cfg.machines == 10);  // ceil(sqrt(10000/100))
  REQUIRE(cfg.sample_prob == Catch::Approx(0.4));
  REQUIRE(cfg.budget_regular ==
          static_cast<std::uint64_t>(8.0 * std::ceil(std::sqrt(1e6))));
  REQUIRE(cfg.budget_central ==
          static_cast<std::uint64_t>(
              8.0 * std::ceil(std::sqrt(1e6) * std::log2(101.0))));
  REQUIRE_THROWS_AS(ClusterConfig::with_defaults(0, 5, 1),
                    std::invalid_argument);
}

TEST_CASE("partition covers the ground set with disjoint parts") {
  ClusterConfig cfg = ClusterConfig::with_defaults(500, 5, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    Partition p = partition_and_sample(cfg);
    std::set<ElementId> seen;
    std::size_t total = 0;
    for (const auto& part : p.parts) {
      total += part.size();
      for (ElementId e : part) {
        REQUIRE(seen.insert(e).second);  // disjoint
        REQUIRE(e < cfg.n);
      }
    }
    REQUIRE(total == cfg.n);  // covering
  }
}

TEST_CASE("sampling probability one returns the whole ground set") {
  ClusterConfig cfg = ClusterConfig::with_defaults(50, 40, 11);
  REQUIRE(cfg.sample_prob == 1.0);
  Partition p = partition_and_sample(cfg);
  REQUIRE(p.sample.size() == cfg.n);
}

TEST_CASE("sample size concentrates at the binomial mean") {
  // n = 10^4, k = 10^2 gives p = 0.4 and mean 4000; the average over
  // 200 seeds must land within 3 standard errors.
  ClusterConfig cfg = ClusterConfig::with_defaults(10000, 100, 0);
  double total = 0.0;
  const int runs = 200;
  for (int seed = 0; seed < runs; ++seed) {
    cfg.seed = static_cast<std::uint64_t>(seed);
    total += static_cast<double>(partition_and_sample(cfg).sample.size());
  }
  double mean = total / runs;
  double expected = cfg.n * cfg.sample_prob;
  double stderr_mean =
      std::sqrt(cfg.n * cfg.sample_prob * (1.0 - cfg.sample_prob) / runs);
  REQUIRE(std::abs(mean - expected) <= 3.0 * stderr_mean);
}

TEST_CASE("partition and sample are reproducible per seed") {
  ClusterConfig cfg = ClusterConfig::with_defaults(300, 10, 1234);
  Partition a = partition_and_sample(cfg, 2);
  Partition b = partition_and_sample(cfg, 2);
  REQUIRE(a.sample == b.sample);
  REQUIRE(a.parts == b.parts);
  Partition other_phase = partition_and_sample(cfg, 3);
  REQUIRE(a.sample != other_phase.sample);
}

namespace {

ClusterConfig tiny_cluster(std::uint32_t machines) {
  ClusterConfig cfg = ClusterConfig::with_defaults(10, 2, 5);
  cfg.machines = machines;
  return cfg;
}

}  // namespace

TEST_CASE("run_round delivers nothing when nobody sends") {
  ClusterSim sim(tiny_cluster(2));
  sim.run_round([](int, const std::vector<Message>&) {
    return std::vector<Message>{};
  });
  REQUIRE(sim.ledger().compute_rounds == 1);
  sim.run_round([](int m, const std::vector<Message>& inbox) {
    REQUIRE(inbox.empty());
    (void)m;
    return std::vector<Message>{};
  });
  REQUIRE(sim.ledger().compute_rounds == 2);
  for (const auto& round : sim.ledger().rounds) {
    for (const auto& m : round.per_machine) {
      REQUIRE(m.received == 0);
      REQUIRE(m.sent == 0);
    }
  }
}

TEST_CASE("run_round delivers exactly what was sent") {
  ClusterSim sim(tiny_cluster(3));
  const int central = sim.central_id();
  std::vector<ElementId> payload{4, 5, 6, 7, 8};

  std::vector<ClusterSim::Program> programs(sim.total_machines());
  for (auto& p : programs) {
    p = [](int, const std::vector<Message>&) {
      return std::vector<Message>{};
    };
  }
  programs[1] = [&](int m, const std::vector<Message>&) {
    return std::vector<Message>{{m, central, 9, payload}};
  };
  sim.run_round(programs);
  REQUIRE(sim.ledger().rounds[0].per_machine[1].sent == 5);

  bool checked = false;
  sim.run_round([&](int m, const std::vector<Message>& inbox) {
    if (m == central) {
      REQUIRE(inbox.size() == 1);
      REQUIRE(inbox[0].from == 1);
      REQUIRE(inbox[0].tag == 9);
      REQUIRE(inbox[0].elements == payload);
      checked = true;
    } else {
      REQUIRE(inbox.empty());
    }
    return std::vector<Message>{};
  });
  REQUIRE(checked);
  REQUIRE(sim.ledger().received(2, central) == 5);
}

TEST_CASE("overlapping sends arrive as a multiset union") {
  ClusterSim sim(tiny_cluster(2));
  const int central = sim.central_id();
  sim.run_round([&](int m, const std::vector<Message>&)
                    -> std::vector<Message> {
    if (m == central) return {};
    return {{m, central, 0, {1, 2, 3}}};
  });
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    if (m == central) {
      auto all = inbox_elements(inbox, 0);
      REQUIRE(all.size() == 6);  // duplicates kept; dedupe is the
                                 // receiver's job
      REQUIRE(inbox.size() == 2);
    }
    return {};
  });
  REQUIRE(sim.ledger().received(2, central) == 6);
}

TEST_CASE("conservation: everything delivered was sent the round before") {
  ClusterSim sim(tiny_cluster(3));
  RngStream rng = named_stream(17, "conservation");
  for (int round = 0; round < 4; ++round) {
    sim.run_round([&](int m, const std::vector<Message>&)
                      -> std::vector<Message> {
      std::vector<Message> out;
      std::uint64_t count = rng.next_below(4);
      for (std::uint64_t i = 0; i < count; ++i) {
        int to = static_cast<int>(rng.next_below(sim.total_machines()));
        out.push_back({m, to, 0, {static_cast<ElementId>(i)}});
      }
      return out;
    });
  }
  const auto& ledger = sim.ledger();
  for (std::size_t r = 1; r < ledger.rounds.size(); ++r) {
    std::uint64_t sent_before = 0, received_now = 0;
    for (const auto& m : ledger.rounds[r - 1].per_machine) {
      sent_before += m.sent;
    }
    for (const auto& m : ledger.rounds[r].per_machine) {
      received_now += m.received;
    }
    REQUIRE(received_now == sent_before);
  }
}

TEST_CASE("messages to unknown machines are protocol errors") {
  ClusterSim sim(tiny_cluster(2));
  REQUIRE_THROWS_AS(
      sim.run_round([&](int m, const std::vector<Message>&)
                        -> std::vector<Message> {
        if (m == 0) return {{m, 99, 0, {1}}};
        return {};
      }),
      ProtocolError);
}

TEST_CASE("budget enforcement") {
  ClusterConfig cfg = tiny_cluster(2);
  cfg.budget_central = 2;

  auto flood = [](ClusterSim& sim) {
    const int central = sim.central_id();
    sim.run_round([&](int m, const std::vector<Message>&)
                      -> std::vector<Message> {
      if (m == central) return {};
      return {{m, central, 0, {1, 2, 3}}};
    });
  };
  auto consume = [](ClusterSim& sim) {
    sim.run_round(
        [](int, const std::vector<Message>&) { return std::vector<Message>{}; });
  };

  SECTION("fail aborts at the violating round") {
    cfg.enforcement = Enforcement::kFail;
    ClusterSim sim(cfg);
    flood(sim);
    REQUIRE_THROWS_AS(consume(sim), BudgetError);
  }
  SECTION("warn records the violation and continues") {
    cfg.enforcement = Enforcement::kWarn;
    ClusterSim sim(cfg);
    flood(sim);
    consume(sim);
    REQUIRE(sim.ledger().violations.size() == 1);
    REQUIRE(sim.ledger().violations[0].machine == sim.central_id());
    REQUIRE(sim.ledger().violations[0].received == 6);
    REQUIRE(sim.ledger().violations[0].budget == 2);
  }
  SECTION("off ignores the budgets") {
    cfg.enforcement = Enforcement::kOff;
    ClusterSim sim(cfg);
    flood(sim);
    consume(sim);
    REQUIRE(sim.ledger().violations.empty());
  }
}

TEST_CASE("distribution steps are ledgered but not counted as rounds") {
  ClusterConfig cfg = tiny_cluster(2);
  ClusterSim sim(cfg);
  Partition p = partition_and_sample(cfg);
  distribute_partition(sim, p, true);
  REQUIRE(sim.ledger().distribution_steps == 1);
  REQUIRE(sim.ledger().compute_rounds == 0);
  std::uint64_t seen = 0;
  sim.run_round([&](int m, const std::vector<Message>& inbox)
                    -> std::vector<Message> {
    (void)m;
    for (const auto& msg : inbox) seen += msg.elements.size();
    return {};
  });
  REQUIRE(sim.ledger().compute_rounds == 1);
  REQUIRE(sim.ledger().algorithm_rounds(false) == 1);
  REQUIRE(sim.ledger().algorithm_rounds(true) == 2);
  // Workers got V_i + S, the central machine got S.
  std::uint64_t expected =
      cfg.n + (cfg.machines + 1) * p.sample.size();
  REQUIRE(seen == expected);
}
