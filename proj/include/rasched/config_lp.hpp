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

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rasched/errors.hpp"
#include "rasched/instance.hpp"
#include "rasched/simplex.hpp"

namespace rasched {

// Configuration counts are exponential in the per-machine allowed job count;
// anything past this is refused instead of attempted. This solver is a
// desk-scale oracle by design.
inline constexpr int kDefaultEnumerationGuard = 20;

struct Configuration {
  int machine = 0;
  std::vector<int> jobs;  // canonical indices, ascending

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct PrimalEntry {
  int machine = 0;
  std::vector<int> jobs;
  Rational weight;
};

struct PrimalSolution {
  std::vector<PrimalEntry> entries;  // nonzero weights only
};

struct DualSolution {
  std::vector<Rational> y;  // per machine, >= 0
  std::vector<Rational> z;  // per job (canonical order), >= 0
};

struct LPResult {
  Rational T;
  bool feasible = false;
  std::optional<PrimalSolution> primal;           // present iff feasible
  std::optional<DualSolution> infeasibility_dual;  // Farkas prices iff infeasible
};

namespace detail {

inline std::vector<int> allowed_jobs_on(const Instance& inst, int machine) {
  std::vector<int> out;
  for (int j = 0; j < inst.job_count(); ++j)
    if (job_allowed_on(inst.jobs[static_cast<std::size_t>(j)], machine)) out.push_back(j);
  return out;
}

inline void check_guard(const Instance& inst, int guard) {
  for (int i = 0; i < inst.machine_count; ++i) {
    const auto count = allowed_jobs_on(inst, i).size();
    if (count > static_cast<std::size_t>(guard))
      throw GuardExceeded("machine " + std::to_string(i) + " admits " +
                          std::to_string(count) + " jobs; enumeration guard is " +
                          std::to_string(guard));
  }
}

// All subsets that fit within budget, flagging maximal ones. `maximal_only`
// prunes the output, not the search.
inline void enumerate_fitting(const Instance& inst, const std::vector<int>& allowed,
                              const Rational& budget, bool maximal_only,
                              std::vector<std::vector<int>>& out) {
  std::vector<int> chosen;
  std::vector<Rational> suffix_sum(allowed.size() + 1, Rational(0));
  for (std::size_t k = allowed.size(); k-- > 0;)
    suffix_sum[k] = suffix_sum[k + 1] + inst.jobs[static_cast<std::size_t>(allowed[k])].p;

  auto emit = [&](const Rational& used) {
    if (maximal_only) {
      for (int j : allowed) {
        if (std::binary_search(chosen.begin(), chosen.end(), j)) continue;
        if (used + inst.jobs[static_cast<std::size_t>(j)].p <= budget) return;
      }
    }
    out.push_back(chosen);
  };

  auto rec = [&](auto&& self, std::size_t pos, Rational used) -> void {
    if (pos == allowed.size()) {
      emit(used);
      return;
    }
    if (used + suffix_sum[pos] <= budget) {
      // Everything left fits; the only maximal completion takes it all.
      if (maximal_only) {
        const std::size_t mark = chosen.size();
        for (std::size_t k = pos; k < allowed.size(); ++k) chosen.push_back(allowed[k]);
        emit(used + suffix_sum[pos]);
        chosen.resize(mark);
        return;
      }
    }
    const Rational& p = inst.jobs[static_cast<std::size_t>(allowed[pos])].p;
    if (used + p <= budget) {
      chosen.push_back(allowed[pos]);
      self(self, pos + 1, used + p);
      chosen.pop_back();
    }
    self(self, pos + 1, used);
  };
  rec(rec, 0, Rational(0));
}

}  // namespace detail

// Every subset of the jobs allowed on `machine` whose total size fits in T,
// including the empty one, in a fixed depth-first order.
inline std::vector<Configuration> enumerate_configs(const Instance& inst, int machine,
                                                    const Rational& T,
                                                    int guard = kDefaultEnumerationGuard) {
  if (machine < 0 || machine >= inst.machine_count)
    throw std::invalid_argument("enumerate_configs: machine out of range");
  if (T < 0) throw std::invalid_argument("enumerate_configs: T must be nonnegative");
  const auto allowed = detail::allowed_jobs_on(inst, machine);
  if (allowed.size() > static_cast<std::size_t>(guard))
    throw GuardExceeded("machine " + std::to_string(machine) + " admits " +
                        std::to_string(allowed.size()) + " jobs; enumeration guard is " +
                        std::to_string(guard));
  std::vector<std::vector<int>> sets;
  detail::enumerate_fitting(inst, allowed, T, /*maximal_only=*/false, sets);
  std::vector<Configuration> out;
  out.reserve(sets.size());
  for (auto& s : sets) out.push_back(Configuration{machine, std::move(s)});
  return out;
}

// Full constraint check of a claimed primal solution.
inline bool verify_primal(const Instance& inst, const Rational& T,
                          const PrimalSolution& sol) {
  const int m = inst.machine_count;
  std::vector<Rational> machine_total(static_cast<std::size_t>(m));
  std::vector<Rational> coverage(static_cast<std::size_t>(inst.jobs.size()));
  for (const PrimalEntry& e : sol.entries) {
    if (e.machine < 0 || e.machine >= m) return false;
    if (e.weight < 0) return false;
    Rational size;
    for (int j : e.jobs) {
      if (j < 0 || j >= inst.job_count()) return false;
      if (!job_allowed_on(inst.jobs[static_cast<std::size_t>(j)], e.machine)) return false;
      size += inst.jobs[static_cast<std::size_t>(j)].p;
      coverage[static_cast<std::size_t>(j)] += e.weight;
    }
    if (size > T) return false;
    machine_total[static_cast<std::size_t>(e.machine)] += e.weight;
  }
  for (const Rational& v : machine_total)
    if (v > 1) return false;
  for (const Rational& v : coverage)
    if (v < 1) return false;
  return true;
}

// Exact feasibility of the configuration mixture system at target T.
// Internally only maximal configurations enter the tableau: coverage
// constraints are >=, so weight on a configuration can always shift to a
// maximal superset without changing feasibility.
inline LPResult lp_feasible(const Instance& inst, const Rational& T,
                            int guard = kDefaultEnumerationGuard) {
  if (T < 0) throw std::invalid_argument("lp_feasible: T must be nonnegative");
  detail::check_guard(inst, guard);

  simplex::CoverSystem sys;
  sys.packing_rows = inst.machine_count;
  sys.covering_rows = inst.job_count();
  std::vector<int> column_machine;
  std::vector<std::vector<int>> column_jobs;
  for (int i = 0; i < inst.machine_count; ++i) {
    const auto allowed = detail::allowed_jobs_on(inst, i);
    std::vector<std::vector<int>> sets;
    detail::enumerate_fitting(inst, allowed, T, /*maximal_only=*/true, sets);
    for (auto& s : sets) {
      if (s.empty()) continue;
      sys.columns.push_back(simplex::CoverColumn{i, s});
      column_machine.push_back(i);
      column_jobs.push_back(std::move(s));
    }
  }

  const simplex::CoverResult sol = simplex::phase1_feasible(sys);
  LPResult res;
  res.T = T;
  res.feasible = sol.feasible;
  if (sol.feasible) {
    PrimalSolution primal;
    for (std::size_t c = 0; c < sol.x.size(); ++c)
      if (sol.x[c] != 0)
        primal.entries.push_back(PrimalEntry{column_machine[c], column_jobs[c], sol.x[c]});
    if (!verify_primal(inst, T, primal))
      throw InvariantViolation("simplex returned a primal point violating its constraints");
    res.primal = std::move(primal);
  } else {
    res.infeasibility_dual = DualSolution{sol.packing_price, sol.covering_price};
  }
  return res;
}

// Distinct subset sums of all processing times, ascending, including 0.
// LP feasibility can only flip where some configuration set changes, and
// those thresholds are subset sums.
inline std::vector<Rational> subset_sums(const Instance& inst) {
  std::set<Rational> sums{Rational(0)};
  for (const Job& j : inst.jobs) {
    std::set<Rational> next = sums;
    for (const Rational& s : sums) next.insert(s + j.p);
    sums = std::move(next);
    if (sums.size() > (1u << 22))
      throw GuardExceeded("subset-sum grid exceeds 2^22 values");
  }
  return {sums.begin(), sums.end()};
}

// Smallest T at which the mixture system is feasible: binary search over the
// subset-sum grid, where feasibility is piecewise constant.
inline Rational opt_star(const Instance& inst, int guard = kDefaultEnumerationGuard) {
  detail::check_guard(inst, guard);
  const std::vector<Rational> grid = subset_sums(inst);
  // grid.front() == 0 is infeasible (there is at least one job); the full
  // sum is always feasible (assign every job to some allowed machine).
  int lo = 0;
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
  return grid[static_cast<std::size_t>(hi)];
}

struct DualCheck {
  bool feasible = false;
  Rational objective;                    // sum(y) - sum(z)
  std::optional<int> violating_machine;  // witness when infeasible
};

namespace detail {

// Max total value over subsets of (p, z) items fitting in `budget`, by
// depth-first branch and bound with a fractional bound. Exact rationals rule
// out the usual integer DP.
inline Rational knapsack_max(const std::vector<Rational>& p, const std::vector<Rational>& z,
                             const Rational& budget) {
  const std::size_t n = p.size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Rational lhs = z[a] * p[b];
    const Rational rhs = z[b] * p[a];
    if (lhs != rhs) return lhs > rhs;
    return a < b;
  });

  Rational best(0);
  auto rec = [&](auto&& self, std::size_t pos, Rational used, Rational value) -> void {
    if (value > best) best = value;
    if (pos == n) return;
    Rational bound = value;
    Rational room = budget - used;
    for (std::size_t k = pos; k < n; ++k) {
      const Rational& pk = p[order[k]];
      const Rational& zk = z[order[k]];
      if (pk <= room) {
        bound += zk;
        room -= pk;
      } else {
        bound += zk * room / pk;
        break;
      }
    }
    if (bound <= best) return;
    if (p[order[pos]] <= budget - used)
      self(self, pos + 1, used + p[order[pos]], value + z[order[pos]]);
    self(self, pos + 1, used, value);
  };
  rec(rec, 0, Rational(0), Rational(0));
  return best;
}

}  // namespace detail

// Checks a claimed dual point: for every machine the best configuration value
// (an exact knapsack over allowed jobs) must not exceed y_i. A feasible point
// with negative objective certifies that no mixture system exists at T.
inline DualCheck verify_dual(const Instance& inst, const Rational& T,
                             const DualSolution& d) {
  if (static_cast<int>(d.y.size()) != inst.machine_count)
    throw std::invalid_argument("verify_dual: y must have one entry per machine");
  if (static_cast<int>(d.z.size()) != inst.job_count())
    throw std::invalid_argument("verify_dual: z must have one entry per job");
  for (const Rational& v : d.y)
    if (v < 0) throw std::invalid_argument("verify_dual: negative y entry");
  for (const Rational& v : d.z)
    if (v < 0) throw std::invalid_argument("verify_dual: negative z entry");

  DualCheck out;
  for (const Rational& v : d.y) out.objective += v;
  for (const Rational& v : d.z) out.objective -= v;
  out.feasible = true;
  for (int i = 0; i < inst.machine_count; ++i) {
    std::vector<Rational> p, z;
    for (int j = 0; j < inst.job_count(); ++j) {
      const Job& job = inst.jobs[static_cast<std::size_t>(j)];
      if (!job_allowed_on(job, i)) continue;
      if (d.z[static_cast<std::size_t>(j)] == 0) continue;  // never improves the max
      if (job.p > T) continue;
      p.push_back(job.p);
      z.push_back(d.z[static_cast<std::size_t>(j)]);
    }
    if (detail::knapsack_max(p, z, T) > d.y[static_cast<std::size_t>(i)]) {
      out.feasible = false;
      out.violating_machine = i;
      break;
    }
  }
  return out;
}

}  // namespace rasched
