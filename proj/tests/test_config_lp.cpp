/*
Copyright 2026 The rasched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "rasched/config_lp.hpp"
#include "rasched/json_io.hpp"
#include "rasched/oracle.hpp"
#include "test_support.hpp"

using rasched::Configuration;
using rasched::DualSolution;
using rasched::enumerate_configs;
using rasched::GuardExceeded;
using rasched::Instance;
using rasched::lp_feasible;
using rasched::LPResult;
using rasched::opt_star;
using rasched::Rational;
using rasched::verify_dual;
using rasched::verify_primal;
using testsupport::make_i2;
using testsupport::make_single;

namespace {

std::set<std::vector<int>> config_sets(const std::vector<Configuration>& configs) {
  std::set<std::vector<int>> out;
  for (const Configuration& c : configs) out.insert(c.jobs);
  return out;
}

}  // namespace

TEST_CASE("enumerate_configs: i2 machine 0 at T = 1") {
  const Instance i2 = make_i2();
  const auto sets = config_sets(enumerate_configs(i2, 0, Rational(1)));
  // {}, {small-on-0}, {big}; the pair sums to 3/2 > 1.
  const std::set<std::vector<int>> expected{{}, {0}, {2}};
  CHECK(sets == expected);
}

TEST_CASE("enumerate_configs: only the empty configuration at T = 0") {
  const Instance i2 = make_i2();
  for (int i = 0; i < 2; ++i) {
    const auto configs = enumerate_configs(i2, i, Rational(0));
    REQUIRE(configs.size() == 1);
    CHECK(configs[0].jobs.empty());
  }
}

TEST_CASE("enumerate_configs: single job at its own size") {
  const Instance one = make_single(1, 1);
  const auto sets = config_sets(enumerate_configs(one, 0, Rational(1)));
  const std::set<std::vector<int>> expected{{}, {0}};
  CHECK(sets == expected);
}

TEST_CASE("enumerate_configs: every emitted set fits and none is missing") {
  const Instance inst =
      rasched::generate_random(3, 9, rasched::sixths_grid(), Rational(2, 3), 11);
  const Rational T(7, 6);
  for (int i = 0; i < inst.machine_count; ++i) {
    const auto configs = enumerate_configs(inst, i, T);
    std::set<std::vector<int>> seen;
    for (const Configuration& c : configs) {
      Rational total;
      for (int j : c.jobs) {
        CHECK(rasched::job_allowed_on(inst.jobs[static_cast<std::size_t>(j)], i));
        total += inst.jobs[static_cast<std::size_t>(j)].p;
      }
      CHECK(total <= T);
      CHECK(seen.insert(c.jobs).second);  // each subset exactly once
    }
    // Count against direct bitmask enumeration.
    std::vector<int> allowed;
    for (int j = 0; j < inst.job_count(); ++j)
      if (rasched::job_allowed_on(inst.jobs[static_cast<std::size_t>(j)], i)) allowed.push_back(j);
    std::size_t expected = 0;
    for (std::size_t mask = 0; mask < (1u << allowed.size()); ++mask) {
      Rational total;
      for (std::size_t b = 0; b < allowed.size(); ++b)
        if (mask & (1u << b)) total += inst.jobs[static_cast<std::size_t>(allowed[b])].p;
      expected += total <= T;
    }
    CHECK(configs.size() == expected);
  }
}

TEST_CASE("enumeration guard refuses oversized machines") {
  std::vector<rasched::Job> jobs;
  for (int k = 0; k < 25; ++k) jobs.push_back(testsupport::job(1, 6, {0}, k));
  const Instance wide = rasched::make_instance(1, std::move(jobs));
  CHECK_THROWS_AS(enumerate_configs(wide, 0, Rational(1)), GuardExceeded);
  CHECK_THROWS_AS(lp_feasible(wide, Rational(1)), GuardExceeded);
  CHECK_THROWS_AS(opt_star(wide), GuardExceeded);
  CHECK_NOTHROW(lp_feasible(wide, Rational(1), 25));
}

TEST_CASE("lp_feasible: i2 flips between 1 and 3/2") {
  const Instance i2 = make_i2();
  const LPResult at1 = lp_feasible(i2, Rational(1));
  CHECK(!at1.feasible);
  REQUIRE(at1.infeasibility_dual.has_value());
  const auto farkas = verify_dual(i2, Rational(1), *at1.infeasibility_dual);
  CHECK(farkas.feasible);
  CHECK(farkas.objective < 0);

  const LPResult at32 = lp_feasible(i2, Rational(3, 2));
  REQUIRE(at32.feasible);
  REQUIRE(at32.primal.has_value());
  CHECK(verify_primal(i2, Rational(3, 2), *at32.primal));
  // An integral split exists at 3/2: all weights can be 0/1.
  for (const auto& e : at32.primal->entries) CHECK(e.weight > 0);
}

TEST_CASE("lp_feasible: single unit job at T = 1") {
  const Instance one = make_single(1, 1);
  const LPResult res = lp_feasible(one, Rational(1));
  REQUIRE(res.feasible);
  REQUIRE(res.primal.has_value());
  REQUIRE(res.primal->entries.size() == 1);
  CHECK(res.primal->entries[0].jobs == std::vector<int>{0});
  CHECK(res.primal->entries[0].weight == 1);
}

TEST_CASE("opt_star pinned values") {
  CHECK(opt_star(make_single(5, 1)) == 5);
  CHECK(opt_star(make_i2()) == Rational(3, 2));
  const Instance shared =
      rasched::make_instance(2, {testsupport::job(1, 1, {0, 1}, 0)});
  CHECK(opt_star(shared) == 1);
}

TEST_CASE("feasibility is monotone in T and opt_star is a threshold") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Instance inst =
        rasched::generate_random(3, 6, rasched::sixths_grid(), Rational(2, 3), seed);
    const Rational star = opt_star(inst);
    const auto grid = rasched::subset_sums(inst);
    for (const Rational& t : grid) {
      const bool feasible = lp_feasible(inst, t).feasible;
      CHECK(feasible == (t >= star));
    }
  }
}

TEST_CASE("weak duality: opt_star never exceeds the integral optimum") {
  for (std::uint64_t seed = 20; seed < 32; ++seed) {
    const Instance inst =
        rasched::generate_random(2 + seed % 3, 5, rasched::sixths_grid(), Rational(1, 2), seed);
    CHECK(opt_star(inst) <= rasched::oracle::brute_force_opt(inst).opt);
  }
}

TEST_CASE("verify_dual: all-zero dual is feasible but certifies nothing") {
  const Instance i2 = make_i2();
  DualSolution zero{{Rational(0), Rational(0)},
                    {Rational(0), Rational(0), Rational(0)}};
  const auto res = verify_dual(i2, Rational(1), zero);
  CHECK(res.feasible);
  CHECK(res.objective == 0);
}

TEST_CASE("verify_dual: a singleton configuration already violates") {
  const Instance i2 = make_i2();
  DualSolution d{{Rational(0), Rational(0)}, {Rational(1), Rational(0), Rational(0)}};
  const auto res = verify_dual(i2, Rational(1), d);
  CHECK(!res.feasible);
  REQUIRE(res.violating_machine.has_value());
  CHECK(*res.violating_machine == 0);
}

TEST_CASE("verify_dual rejects malformed input") {
  const Instance i2 = make_i2();
  CHECK_THROWS_AS(verify_dual(i2, Rational(1), DualSolution{{Rational(0)}, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      verify_dual(i2, Rational(1),
                  DualSolution{{Rational(-1), Rational(0)},
                               {Rational(0), Rational(0), Rational(0)}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      verify_dual(i2, Rational(1),
                  DualSolution{{Rational(0), Rational(0)},
                               {Rational(0), Rational(0), Rational(-1)}}),
      std::invalid_argument);
}

TEST_CASE("verify_dual knapsack agrees with subset enumeration") {
  std::mt19937_64 eng(5);
  for (int round = 0; round < 30; ++round) {
    const Instance inst = rasched::generate_random(
        2, 4 + static_cast<int>(eng() % 6), rasched::sixths_grid(), Rational(2, 3), eng());
    DualSolution d;
    d.y.assign(static_cast<std::size_t>(inst.machine_count), Rational(0));
    for (int j = 0; j < inst.job_count(); ++j)
      d.z.emplace_back(static_cast<long long>(eng() % 5), 6);
    const Rational T(1 + static_cast<long long>(eng() % 12), 6);
    // Expected best value per machine by bitmask enumeration.
    for (int i = 0; i < inst.machine_count; ++i) {
      std::vector<int> allowed;
      for (int j = 0; j < inst.job_count(); ++j)
        if (rasched::job_allowed_on(inst.jobs[static_cast<std::size_t>(j)], i)) allowed.push_back(j);
      Rational best;
      for (std::size_t mask = 0; mask < (1u << allowed.size()); ++mask) {
        Rational size, value;
        for (std::size_t b = 0; b < allowed.size(); ++b) {
          if (!(mask & (1u << b))) continue;
          size += inst.jobs[static_cast<std::size_t>(allowed[b])].p;
          value += d.z[static_cast<std::size_t>(allowed[b])];
        }
        if (size <= T && value > best) best = value;
      }
      d.y[static_cast<std::size_t>(i)] = best;
    }
    // y set to the exact knapsack maximum: feasible, and lowering any y with
    // a positive max breaks it.
    CHECK(verify_dual(inst, T, d).feasible);
    for (int i = 0; i < inst.machine_count; ++i) {
      if (d.y[static_cast<std::size_t>(i)] == 0) continue;
      DualSolution lowered = d;
      lowered.y[static_cast<std::size_t>(i)] -= Rational(1, 100);
      CHECK(!verify_dual(inst, T, lowered).feasible);
    }
  }
}

TEST_CASE("dual JSON lists z by original input position") {
  const Instance i2 = make_i2();
  // canonical order: orig 1, orig 2, orig 0
  const DualSolution d{{Rational(1, 3), Rational(1, 4)},
                       {Rational(1), Rational(2), Rational(3)}};
  const rasched::json doc = rasched::dual_to_json(i2, d);
  CHECK(doc["y"] == rasched::json::array({"1/3", "1/4"}));
  CHECK(doc["z"] == rasched::json::array({"3", "1", "2"}));
}

TEST_CASE("negative-objective feasible duals and lp_feasible agree") {
  for (std::uint64_t seed = 40; seed < 52; ++seed) {
    const Instance inst =
        rasched::generate_random(3, 6, rasched::sixths_grid(), Rational(1, 2), seed);
    const auto grid = rasched::subset_sums(inst);
    for (const Rational& t : grid) {
      if (t == 0) continue;
      const LPResult res = lp_feasible(inst, t);
      if (res.feasible) {
        CHECK(verify_primal(inst, t, *res.primal));
      } else {
        const auto check = verify_dual(inst, t, *res.infeasibility_dual);
        CHECK(check.feasible);
        CHECK(check.objective < 0);
      }
    }
  }
}
