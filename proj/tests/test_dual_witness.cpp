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

#include "rasched/config_lp.hpp"
#include "rasched/dual_witness.hpp"
#include "rasched/json_io.hpp"
#include "rasched/local_search.hpp"
#include "test_support.hpp"

using namespace rasched;
using namespace rasched::local_search;
using dual_witness::build_witness;
using dual_witness::certify;
using dual_witness::Witness;
using testsupport::make_i2;
using testsupport::make_single;

TEST_CASE("witness of the oversized single job") {
  const Instance two = make_single(2, 1);
  const ExtendResult res = extend(two, PartialSchedule::empty_for(two), 0);
  REQUIRE(!res.completed);
  const Witness w = build_witness(*res.stuck);
  CHECK(w.dual.z == std::vector<Rational>{Rational(5, 6)});
  CHECK(w.dual.y == std::vector<Rational>{Rational(0)});
  CHECK(w.objective == Rational(-5, 6));
  const auto claims = certify(*res.stuck);
  CHECK(claims.claim_negative_objective);
  CHECK(claims.claim_dual_feasible);  // only the empty configuration fits
}

TEST_CASE("empty blocker tree means no machine adjustments") {
  const Instance inst = make_instance(
      2, {testsupport::job(2, 1, {0, 1}, 0)});
  const ExtendResult res = extend(inst, PartialSchedule::empty_for(inst), 0);
  REQUIRE(!res.completed);
  CHECK(res.stuck->tree.empty());
  const Witness w = build_witness(*res.stuck);
  // y_i equals the active value on each machine; nothing is assigned.
  CHECK(w.dual.y == std::vector<Rational>{Rational(0), Rational(0)});
  CHECK(w.dual.z == std::vector<Rational>{Rational(5, 6)});
}

TEST_CASE("non-stuck states are rejected before any claim evaluation") {
  const Instance scaled = scale(make_i2(), Rational(3, 2));
  StuckState fake;
  fake.scaled = scaled;
  fake.schedule = PartialSchedule::empty_for(scaled);
  fake.schedule.place(scaled, 0, 0);
  fake.schedule.place(scaled, 1, 1);
  fake.j_new = 2;
  fake.target = Rational(3, 2);
  CHECK_THROWS_AS(build_witness(fake), NotStuck);
  CHECK_THROWS_AS(certify(fake), NotStuck);
}

TEST_CASE("i2 stuck at T = 1/2 certifies and matches the LP verdict") {
  const Instance i2 = make_i2();
  const RunResult res = run(i2, Rational(1, 2));
  REQUIRE(!res.completed);
  const auto claims = certify(*res.stuck);
  CHECK(claims.claim_negative_objective);
  CHECK(claims.claim_dual_feasible);
  CHECK(claims.objective < 0);
  CHECK(!lp_feasible(i2, Rational(1, 2)).feasible);
  CHECK(!lp_feasible(res.stuck->scaled, Rational(1)).feasible);
}

TEST_CASE("regression: oversized resident job forces the single-job witness") {
  // At T = 2/3 two unit jobs scale to 3/2 > 1. One of them sits on a fenced
  // machine when the search jams, and the capped point prices that machine
  // too low (knapsack max 1 vs y = 11/12). A job above 1 fits no unit
  // configuration, so certifying through it alone is airtight.
  const Instance inst = parse_instance(
      R"({"machines":3,"jobs":[{"p":"1","allowed":[1,2]},{"p":"1/2","allowed":[0,1,2]},)"
      R"({"p":"1/6","allowed":[0,2]},{"p":"1/6","allowed":[0,2]},{"p":"1","allowed":[0,2]},)"
      R"({"p":"2/3","allowed":[0,1,2]}]})");
  const Rational T(2, 3);
  REQUIRE(opt_star(inst) > T);
  const RunResult res = run(inst, T);
  REQUIRE(!res.completed);

  // The capped construction alone is infeasible here.
  const Witness capped = dual_witness::detail::reduced_construction(*res.stuck);
  CHECK(!verify_dual(res.stuck->scaled, Rational(1), capped.dual).feasible);

  const Witness w = build_witness(*res.stuck);
  CHECK(w.dual.y == std::vector<Rational>(3, Rational(0)));
  CHECK(w.dual.z == std::vector<Rational>{0, 0, 0, 0, 1, 0});
  CHECK(w.objective == -1);
  const auto claims = certify(*res.stuck);
  CHECK(claims.claim_negative_objective);
  CHECK(claims.claim_dual_feasible);
  CHECK(!lp_feasible(inst, T).feasible);
}

TEST_CASE("the witness is a pure function of the frozen state") {
  const Instance two = make_single(2, 1);
  const ExtendResult res = extend(two, PartialSchedule::empty_for(two), 0);
  REQUIRE(!res.completed);
  const Witness a = build_witness(*res.stuck);
  const Witness b = build_witness(*res.stuck);
  CHECK(a.dual.y == b.dual.y);
  CHECK(a.dual.z == b.dual.z);
  CHECK(a.objective == b.objective);
  CHECK(a.scale_T == b.scale_T);
}

TEST_CASE("every stuck state found below the LP optimum certifies") {
  // Walk the grid downward from just below the LP optimum; completions are
  // checked against the bound, stuck states must certify and agree with the
  // LP verdict.
  int stuck_seen = 0;
  for (std::uint64_t seed = 60; seed < 75; ++seed) {
    const Instance inst = generate_random(2 + static_cast<int>(seed % 4), 6,
                                          sixths_grid(), Rational(1, 2), seed);
    const Rational star = opt_star(inst);
    const auto grid = subset_sums(inst);
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
      const Rational& t = *it;
      if (t >= star || t == 0) continue;
      const RunResult res = run(inst, t);
      if (res.completed) {
        CHECK(res.makespan <= Rational(11, 6) * t);
        continue;
      }
      ++stuck_seen;
      const auto claims = certify(*res.stuck);
      CHECK(claims.claim_negative_objective);
      CHECK(claims.claim_dual_feasible);
      CHECK(!lp_feasible(inst, t).feasible);
      break;  // first stuck value on this instance is enough
    }
  }
  CHECK(stuck_seen > 0);  // the sweep must actually exercise the witness path
}
