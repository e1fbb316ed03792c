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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails. Everything is exact rational
// arithmetic; there are no tolerances to tune.

#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rasched/config_lp.hpp"
#include "rasched/dual_witness.hpp"
#include "rasched/estimate.hpp"
#include "rasched/instance.hpp"
#include "rasched/local_search.hpp"
#include "rasched/oracle.hpp"
#include "test_support.hpp"

using namespace rasched;
using namespace rasched::local_search;

namespace {

const Rational kRatioBound(11, 6);

struct CorpusEntry {
  Instance inst;
  Rational star;
  RunResult at_star;
  std::optional<Rational> below;  // largest subset sum strictly under star
};

// 252 seeded instances: machines 2..5, jobs 4..10, densities 1/3, 2/3, 1,
// three seeds per combination, sizes on the sixths grid.
std::vector<Instance> build_corpus() {
  std::vector<Instance> corpus;
  const std::vector<Rational> densities{Rational(1, 3), Rational(2, 3), Rational(1)};
  std::uint64_t seed = 1;
  for (int machines = 2; machines <= 5; ++machines)
    for (int jobs = 4; jobs <= 10; ++jobs)
      for (const Rational& density : densities)
        for (int rep = 0; rep < 3; ++rep)
          corpus.push_back(
              generate_random(machines, jobs, sixths_grid(), density, seed++));
  return corpus;
}

struct Criterion {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << why;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string ratio_str(const Rational& q) { return to_string(q); }

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int number, const Criterion& c, const std::string& headline) {
    if (c.pass) {
      std::cout << "criterion " << number << ": PASS — " << headline;
      const std::string extra = c.detail.str();
      if (!extra.empty()) std::cout << " (" << extra << ")";
      std::cout << "\n";
    } else {
      std::cout << "criterion " << number << ": FAIL — " << c.detail.str() << "\n";
      ++failures;
    }
    std::cout.flush();
  };

  std::vector<Instance> corpus = build_corpus();
  std::vector<CorpusEntry> entries;
  entries.reserve(corpus.size());

  // --- Criterion 1: every corpus run at the LP optimum completes within the
  // 11/6 bound, exact, in under 120 s single-threaded.
  {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    Rational worst(0);
    for (Instance& inst : corpus) {
      CorpusEntry e{std::move(inst), Rational(0), {}, std::nullopt};
      e.star = opt_star(e.inst);
      e.at_star = run(e.inst, e.star);
      if (!e.at_star.completed) {
        c.fail("run stuck at the LP optimum (instance " + std::to_string(entries.size()) + ")");
      } else {
        const Rational ratio = e.at_star.makespan / e.star;
        if (ratio > kRatioBound)
          c.fail("makespan ratio " + ratio_str(ratio) + " exceeds 11/6");
        if (ratio > worst) worst = ratio;
      }
      const auto grid = subset_sums(e.inst);
      for (const Rational& t : grid)
        if (t < e.star && t > 0 && (!e.below || t > *e.below)) e.below = t;
      entries.push_back(std::move(e));
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 120.0)
      c.fail("runtime " + std::to_string(elapsed) + " s exceeds the 120 s target");
    c.detail << entries.size() << " instances, max makespan/OPT* = " << ratio_str(worst)
             << ", " << elapsed << " s";
    report(1, c, "bound suite: run(inst, OPT*) completes with makespan <= (11/6) OPT*");
  }

  // --- Criterion 2: OPT* <= OPT <= local-search makespan, plus the observed
  // integral/fractional gap.
  {
    Criterion c;
    Rational max_gap(0);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const CorpusEntry& e = entries[k];
      const Rational opt = oracle::brute_force_opt(e.inst).opt;
      if (e.star > opt) c.fail("OPT* above OPT on instance " + std::to_string(k));
      if (e.at_star.completed && opt > e.at_star.makespan)
        c.fail("OPT above the local-search makespan on instance " + std::to_string(k));
      const Rational gap = opt / e.star;
      if (gap > kRatioBound)
        c.fail("integral/fractional gap " + ratio_str(gap) + " exceeds 11/6");
      if (gap > max_gap) max_gap = gap;
    }
    c.detail << "max observed OPT/OPT* = " << ratio_str(max_gap);
    report(2, c, "oracle ordering: OPT* <= OPT <= local-search makespan");
  }

  // --- Criterion 3: at the largest grid value below OPT*, every stuck state
  // certifies and the LP independently confirms infeasibility.
  {
    Criterion c;
    int stuck_count = 0, completed_count = 0, skipped = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const CorpusEntry& e = entries[k];
      if (!e.below) {
        ++skipped;
        continue;
      }
      const RunResult res = run(e.inst, *e.below);
      if (res.completed) {
        ++completed_count;
        if (res.makespan > kRatioBound * *e.below)
          c.fail("completion above the bound below OPT* on instance " + std::to_string(k));
        continue;
      }
      ++stuck_count;
      try {
        const auto claims = dual_witness::certify(*res.stuck);
        if (!claims.claim_negative_objective)
          c.fail("claim 1 false on instance " + std::to_string(k));
        if (!claims.claim_dual_feasible)
          c.fail("claim 2 false on instance " + std::to_string(k));
      } catch (const std::exception& ex) {
        c.fail("certify failed on instance " + std::to_string(k) + ": " + ex.what());
      }
      if (lp_feasible(e.inst, *e.below).feasible)
        c.fail("LP feasible below OPT* on instance " + std::to_string(k));
    }
    c.detail << stuck_count << " stuck / " << completed_count << " completed / " << skipped
             << " without a grid value below OPT*";
    report(3, c, "witness soundness: every stuck state certifies, LP concurs");
  }

  // --- Criterion 4: debug-invariant runs are violation-free (the loop
  // invariants hold and the signature vector decreases at every addition;
  // both are checked inside the driver and throw on violation).
  {
    Criterion c;
    long long runs = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const CorpusEntry& e = entries[k];
      RunOptions opts;
      opts.debug_invariants = true;
      try {
        const RunResult at_star = run(e.inst, e.star, opts);
        ++runs;
        if (!at_star.completed) c.fail("debug run stuck at OPT* on instance " + std::to_string(k));
        if (e.below) {
          run(e.inst, *e.below, opts);
          ++runs;
        }
      } catch (const std::exception& ex) {
        c.fail("invariant violation on instance " + std::to_string(k) + ": " + ex.what());
      }
    }
    c.detail << runs << " debug-checked runs, zero violations";
    report(4, c, "invariant suite: loop invariants and signature decrease hold everywhere");
  }

  // --- Criterion 5: the two potential-move evaluators agree on at least 1e5
  // visited states.
  {
    Criterion c;
    long long agreed = 0, visited = 0;
    bool mismatch = false;
    auto hook = [&](const SearchState& st) {
      ++visited;
      if (mismatch) return;
      if (potential_moves(st) == oracle::brute_force_potential_moves(st))
        ++agreed;
      else
        mismatch = true;
    };
    const std::vector<InsertionOrder> orders{InsertionOrder::DescendingSize,
                                             InsertionOrder::InputOrder,
                                             InsertionOrder::Shuffle};
    for (std::uint64_t pass = 0; pass < 64 && visited < 100000; ++pass) {
      for (const CorpusEntry& e : entries) {
        RunOptions opts;
        opts.order = orders[pass % orders.size()];
        opts.shuffle_seed = pass;
        opts.on_iteration = hook;
        run(e.inst, e.star, opts);
        if (e.below) run(e.inst, *e.below, opts);
        if (mismatch || visited >= 100000) break;
      }
    }
    if (mismatch) c.fail("evaluators disagreed after " + std::to_string(agreed) + " states");
    if (visited < 100000)
      c.fail("only " + std::to_string(visited) + " states visited; need 100000");
    c.detail << agreed << " states compared, 100% agreement";
    report(5, c, "differential evaluator: 10^5 visited states, exact agreement");
  }

  // --- Criterion 6: the worked cascade scenario reproduces the documented
  // before/after trees and the re-added blocker value strictly drops.
  {
    Criterion c;
    const Instance inst = testsupport::scenario_instance();
    std::vector<TraceEvent> events;
    std::vector<std::vector<Blocker>> trees;
    SearchOptions opts;
    opts.debug_invariants = true;
    opts.trace = [&](const TraceEvent& ev) { events.push_back(ev); };
    opts.on_iteration = [&](const SearchState& st) { trees.push_back(st.tree); };
    const ExtendResult res =
        extend(inst, testsupport::scenario_start(inst), testsupport::scenario_new_job, opts);

    const std::vector<Blocker> before{
        Blocker{12, 0, BlockerType::BigToLeast, {3, -12}, -1},
        Blocker{11, 1, BlockerType::BigToAny, {2, 3}, 0},
        Blocker{6, 2, BlockerType::SmallToAny, {1, 4}, 1},
        Blocker{4, 0, BlockerType::SmallToAny, {1, 5}, 1},
    };
    const std::vector<Blocker> after{before[0]};
    if (trees.size() < 6 || !(trees[4] == before))
      c.fail("tree before the move does not match the scenario");
    else if (!(trees[5] == after))
      c.fail("suffix deletion left the wrong tree");
    if (events.size() < 6 || events[4].kind != TraceEvent::Kind::PerformMove ||
        events[4].deleted_from != 1)
      c.fail("the valid move did not delete the activator suffix");
    if (events.size() < 6 || events[5].kind != TraceEvent::Kind::AddBlocker ||
        events[5].type != BlockerType::BigToAny || !(events[5].value < before[1].value))
      c.fail("the re-added blocker value did not strictly decrease");
    if (res.completed) c.fail("scenario unexpectedly completed");
    report(6, c, "worked example: suffix deletion exact, re-added value strictly smaller");
  }

  // --- Criterion 7: pinned regressions on the two-machine fixture.
  {
    Criterion c;
    const Instance i2 = testsupport::make_i2();
    if (opt_star(i2) != Rational(3, 2)) c.fail("opt_star(I2) != 3/2");
    if (oracle::brute_force_opt(i2).opt != Rational(3, 2)) c.fail("brute_force_opt(I2) != 3/2");
    if (lp_feasible(i2, Rational(1)).feasible) c.fail("lp_feasible(I2, 1) not infeasible");
    const EstimateResult est = estimate(i2);
    if (est.estimate != Rational(11, 4)) c.fail("estimate(I2) != 11/4");
    if (est.T_hi != Rational(3, 2)) c.fail("estimate T_hi != 3/2");
    if (!est.T_lo || *est.T_lo != Rational(1)) c.fail("estimate T_lo != 1");
    if (!est.certificate || !est.certificate_negative || !est.certificate_feasible)
      c.fail("estimate certificate missing or unverified");
    report(7, c, "pinned regressions: opt_star, brute force, lp verdict, estimate");
  }

  if (failures == 0)
    std::cout << "acceptance: all criteria passed\n";
  else
    std::cout << "acceptance: " << failures << " criterion(s) failed\n";
  return failures == 0 ? 0 : 1;
}
