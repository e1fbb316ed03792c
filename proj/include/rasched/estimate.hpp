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

#include <optional>
#include <vector>

#include "rasched/config_lp.hpp"
#include "rasched/dual_witness.hpp"
#include "rasched/errors.hpp"
#include "rasched/instance.hpp"
#include "rasched/local_search.hpp"

// Makespan estimation: OPT lies between the mixture-LP optimum T* and
// (11/6)T*. T* is found by exact LP probes over the subset-sum grid; the
// local search then produces an actual schedule at T* (it cannot get stuck
// there), and the grid value below T* is refuted by a machine-checkable
// dual certificate.

namespace rasched {

struct EstimateResult {
  std::optional<Rational> T_lo;  // largest grid value certified infeasible
  Rational T_hi;                 // smallest grid value where the LP is feasible
  Rational estimate;             // (11/6) * T_hi
  local_search::RunResult schedule_run;             // completed run at T_hi
  std::optional<dual_witness::Witness> certificate;  // refutation of T_lo
  bool certificate_negative = false;
  bool certificate_feasible = false;
  bool certificate_from_stuck = false;  // stuck-state witness vs LP Farkas prices
};

inline EstimateResult estimate(const Instance& inst, int guard = kDefaultEnumerationGuard) {
  const std::vector<Rational> grid = subset_sums(inst);  // grid[0] == 0
  int lo = 0;  // infeasible (no job fits at T = 0)
  int hi = static_cast<int>(grid.size()) - 1;
  if (!lp_feasible(inst, grid[static_cast<std::size_t>(hi)], guard).feasible)
    throw InvariantViolation("LP infeasible at the total-size target");
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (lp_feasible(inst, grid[static_cast<std::size_t>(mid)], guard).feasible)
      hi = mid;
    else
      lo = mid;
  }

  EstimateResult res;
  res.T_hi = grid[static_cast<std::size_t>(hi)];
  res.estimate = res.T_hi * local_search::load_bound();
  res.schedule_run = local_search::run(inst, res.T_hi);
  if (!res.schedule_run.completed)
    throw InvariantViolation("local search stuck at the LP-feasible target");

  if (lo == 0) return res;  // nothing below T_hi on the positive grid
  res.T_lo = grid[static_cast<std::size_t>(lo)];

  // Preferred certificate: a stuck run at T_lo. If the search happens to
  // succeed below the LP optimum, fall back to the Farkas prices of the
  // infeasible LP itself.
  local_search::RunResult below = local_search::run(inst, *res.T_lo);
  if (!below.completed) {
    const dual_witness::CertifyResult claims = dual_witness::certify(*below.stuck);
    if (!claims.claim_negative_objective || !claims.claim_dual_feasible)
      throw InvariantViolation("stuck-state certificate failed verification");
    res.certificate = dual_witness::build_witness(*below.stuck);
    res.certificate_negative = claims.claim_negative_objective;
    res.certificate_feasible = claims.claim_dual_feasible;
    res.certificate_from_stuck = true;
    return res;
  }

  const LPResult refuted = lp_feasible(inst, *res.T_lo, guard);
  if (refuted.feasible)
    throw InvariantViolation("grid value below the LP optimum reported feasible");
  dual_witness::Witness w;
  w.dual = *refuted.infeasibility_dual;
  w.scale_T = *res.T_lo;
  for (const Rational& v : w.dual.y) w.objective += v;
  for (const Rational& v : w.dual.z) w.objective -= v;
  // The prices certify the scaled instance at target 1 just as well: the
  // configuration sets coincide, only sizes are rescaled.
  const DualCheck check = verify_dual(scale(inst, *res.T_lo), Rational(1), w.dual);
  if (w.objective >= 0 || !check.feasible)
    throw InvariantViolation("LP Farkas certificate failed verification");
  res.certificate = std::move(w);
  res.certificate_negative = true;
  res.certificate_feasible = true;
  res.certificate_from_stuck = false;
  return res;
}

}  // namespace rasched
