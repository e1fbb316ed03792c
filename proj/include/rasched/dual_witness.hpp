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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rasched/config_lp.hpp"
#include "rasched/errors.hpp"
#include "rasched/instance.hpp"
#include "rasched/local_search.hpp"

// Dual infeasibility witnesses from stuck states. A stuck search yields a
// dual point (z, y): active jobs carry value min{p_j, 5/6}; each machine
// carries the value of its active jobs, bumped by +1/6 on big-to-any
// machines and -1/6 on small-to-any machines. The point is feasible for the
// mixture-LP dual at target 1 and has negative objective, which certifies
// that no fractional schedule exists at the attempted makespan.

namespace rasched::dual_witness {

struct Witness {
  DualSolution dual;   // y per machine, z per job (canonical), scaled units
  Rational objective;  // sum(y) - sum(z)
  Rational scale_T;    // unscaled target being refuted
};

namespace detail {

inline void require_stuck(const local_search::StuckState& stuck) {
  const local_search::SearchState view = stuck.view();
  if (local_search::select_valid_move(view))
    throw NotStuck("state has a valid tree move");
  if (!local_search::potential_moves(view).empty())
    throw NotStuck("state has a potential move");
}

}  // namespace detail

namespace detail {

inline Witness reduced_construction(const local_search::StuckState& stuck) {
  const Instance& inst = stuck.scaled;
  const local_search::SearchState view = stuck.view();
  const std::vector<char> active = local_search::active_jobs(view);
  static const Rational value_cap(5, 6);

  Witness w;
  w.scale_T = stuck.target;
  w.dual.z.assign(static_cast<std::size_t>(inst.job_count()), Rational(0));
  for (int j = 0; j < inst.job_count(); ++j)
    if (active[static_cast<std::size_t>(j)])
      w.dual.z[static_cast<std::size_t>(j)] =
          std::min(inst.jobs[static_cast<std::size_t>(j)].p, value_cap);

  std::vector<char> any_small(static_cast<std::size_t>(inst.machine_count), 0);
  std::vector<char> any_big(static_cast<std::size_t>(inst.machine_count), 0);
  for (const local_search::Blocker& b : stuck.tree) {
    if (b.type == local_search::BlockerType::SmallToAny)
      any_small[static_cast<std::size_t>(b.machine)] = 1;
    else if (b.type == local_search::BlockerType::BigToAny)
      any_big[static_cast<std::size_t>(b.machine)] = 1;
  }
  int small_fences = 0, big_fences = 0;
  for (int i = 0; i < inst.machine_count; ++i) {
    if (any_small[static_cast<std::size_t>(i)] && any_big[static_cast<std::size_t>(i)])
      throw InvariantViolation("machine hosts both all-jobs blocker types; y ill-defined");
    small_fences += any_small[static_cast<std::size_t>(i)];
    big_fences += any_big[static_cast<std::size_t>(i)];
  }
  // The counting argument behind the negative objective needs at least as
  // many small-to-any machines as big-to-any machines.
  if (big_fences > small_fences)
    throw InvariantViolation("more big-to-any than small-to-any machines in a stuck state");

  static const Rational sixth(1, 6);
  w.dual.y.assign(static_cast<std::size_t>(inst.machine_count), Rational(0));
  for (int j = 0; j < inst.job_count(); ++j) {
    const int home = stuck.schedule.machine_of(j);
    if (home >= 0) w.dual.y[static_cast<std::size_t>(home)] += w.dual.z[static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < inst.machine_count; ++i) {
    if (any_big[static_cast<std::size_t>(i)]) w.dual.y[static_cast<std::size_t>(i)] += sixth;
    if (any_small[static_cast<std::size_t>(i)]) w.dual.y[static_cast<std::size_t>(i)] -= sixth;
    if (w.dual.y[static_cast<std::size_t>(i)] < 0)
      throw InvariantViolation("witness machine value negative on machine " + std::to_string(i));
  }

  for (const Rational& v : w.dual.y) w.objective += v;
  for (const Rational& v : w.dual.z) w.objective -= v;
  return w;
}

}  // namespace detail

// The capped construction above is provably feasible whenever every scaled
// size fits a unit configuration (p_j <= 1), which holds at any target at or
// above the LP optimum. Deep below the optimum a job can exceed 1; such a
// job fits no configuration at all, so if the capped point fails, a unit of
// value on one oversized job certifies infeasibility on its own.
inline Witness build_witness(const local_search::StuckState& stuck) {
  detail::require_stuck(stuck);
  Witness w = detail::reduced_construction(stuck);

  const Instance& inst = stuck.scaled;
  int oversized = -1;
  for (int j = 0; j < inst.job_count(); ++j)
    if (inst.jobs[static_cast<std::size_t>(j)].p > 1 &&
        (oversized < 0 ||
         inst.jobs[static_cast<std::size_t>(j)].p > inst.jobs[static_cast<std::size_t>(oversized)].p))
      oversized = j;
  if (oversized < 0) return w;
  if (w.objective < 0 && verify_dual(inst, Rational(1), w.dual).feasible) return w;

  Witness fallback;
  fallback.scale_T = stuck.target;
  fallback.dual.y.assign(static_cast<std::size_t>(inst.machine_count), Rational(0));
  fallback.dual.z.assign(static_cast<std::size_t>(inst.job_count()), Rational(0));
  fallback.dual.z[static_cast<std::size_t>(oversized)] = 1;
  fallback.objective = -1;
  return fallback;
}

struct CertifyResult {
  Rational objective;
  bool claim_negative_objective = false;  // sum(z) > sum(y)
  bool claim_dual_feasible = false;       // knapsack check at target 1
};

// Both claims are always evaluated, even when the first fails, for maximum
// diagnostic signal. On a genuine stuck state both must hold; anything else
// is a hard implementation failure, not an expected result.
inline CertifyResult certify(const local_search::StuckState& stuck) {
  const Witness w = build_witness(stuck);  // rejects non-stuck input
  CertifyResult res;
  res.objective = w.objective;
  res.claim_negative_objective = w.objective < 0;
  const DualCheck check = verify_dual(stuck.scaled, Rational(1), w.dual);
  res.claim_dual_feasible = check.feasible;
  return res;
}

}  // namespace rasched::dual_witness
