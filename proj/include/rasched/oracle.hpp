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
#include <cmath>
#include <cstdint>
#include <vector>

#include "rasched/errors.hpp"
#include "rasched/instance.hpp"
#include "rasched/local_search.hpp"

// Brute-force ground truth for small instances. Deliberately naive: the
// potential-move evaluator below re-derives every set and condition by
// direct scans and shares no evaluation code with the search module, so
// differential tests against it are meaningful.

namespace rasched::oracle {

struct OracleResult {
  Rational opt;
  std::vector<int> assignment;  // canonical order, witness for opt
  std::int64_t explored = 0;    // search nodes visited
};

// Exact integral optimum over all allowed assignments. Branch and bound:
// jobs descending by size, machines ascending by current load, prune when
// the partial makespan already matches the incumbent.
inline OracleResult brute_force_opt(const Instance& inst, double node_guard = 1e8) {
  const int n = inst.job_count();
  const int m = inst.machine_count;
  if (static_cast<double>(n) * std::log(static_cast<double>(m)) >
      std::log(node_guard))
    throw GuardExceeded("assignment space exceeds the oracle guard");

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.jobs[static_cast<std::size_t>(a)].p > inst.jobs[static_cast<std::size_t>(b)].p;
  });

  OracleResult res;
  bool have = false;
  std::vector<int> current(static_cast<std::size_t>(n), -1);
  std::vector<Rational> loads(static_cast<std::size_t>(m), Rational(0));

  auto rec = [&](auto&& self, std::size_t depth, const Rational& partial_max) -> void {
    if (have && partial_max >= res.opt) return;
    if (depth == order.size()) {
      res.opt = partial_max;
      res.assignment = current;
      have = true;
      return;
    }
    const int j = order[depth];
    const Job& job = inst.jobs[static_cast<std::size_t>(j)];
    std::vector<int> targets = job.allowed;
    std::sort(targets.begin(), targets.end(), [&](int a, int b) {
      if (loads[static_cast<std::size_t>(a)] != loads[static_cast<std::size_t>(b)])
        return loads[static_cast<std::size_t>(a)] < loads[static_cast<std::size_t>(b)];
      return a < b;
    });
    for (int i : targets) {
      ++res.explored;
      loads[static_cast<std::size_t>(i)] += job.p;
      current[static_cast<std::size_t>(j)] = i;
      self(self, depth + 1, std::max(partial_max, loads[static_cast<std::size_t>(i)]));
      current[static_cast<std::size_t>(j)] = -1;
      loads[static_cast<std::size_t>(i)] -= job.p;
    }
  };
  rec(rec, 0, Rational(0));
  return res;
}

// Unoptimized re-derivation of the potential moves: every set (fenced
// machines, stuck smalls, big jobs) is recomputed per pair by raw loops, and
// the four blocker-type conditions are each evaluated in full, with a
// mutual-exclusivity check. Must agree with the search module exactly.
inline std::vector<local_search::PotentialMove> brute_force_potential_moves(
    const local_search::SearchState& st) {
  using local_search::BlockerType;
  using local_search::PotentialMove;
  const Instance& inst = *st.inst;
  const Rational bound(11, 6);
  const Rational half(1, 2);
  const int n = inst.job_count();
  const int m = inst.machine_count;

  auto small = [&](int j) { return inst.jobs[static_cast<std::size_t>(j)].p <= half; };
  auto on_machine = [&](int j, int i) { return st.schedule.assignment[static_cast<std::size_t>(j)] == i; };

  auto hosts_any_fence = [&](int i) {
    for (const auto& b : st.tree)
      if (b.machine == i &&
          (b.type == BlockerType::SmallToAny || b.type == BlockerType::BigToAny))
        return true;
    return false;
  };
  auto hosts_big_fence = [&](int i) {
    for (const auto& b : st.tree)
      if (b.machine == i && b.type == BlockerType::BigToBig) return true;
    return false;
  };
  auto hosts_least_fence = [&](int i) {
    for (const auto& b : st.tree)
      if (b.machine == i && b.type == BlockerType::BigToLeast) return true;
    return false;
  };
  auto min_big_on = [&](int i) {
    for (int j = 0; j < n; ++j)
      if (on_machine(j, i) && !small(j)) return j;
    return -1;
  };
  auto undesirable = [&](int j, int i) {
    if (hosts_any_fence(i)) return true;
    if (small(j)) return false;
    if (hosts_big_fence(i)) return true;
    if (hosts_least_fence(i)) {
      const int mb = min_big_on(i);
      if (mb >= 0 && j <= mb) return true;
    }
    return false;
  };
  auto in_stuck_small = [&](int j) {
    if (!small(j)) return false;
    for (int i : inst.jobs[static_cast<std::size_t>(j)].allowed) {
      if (on_machine(j, i)) continue;
      if (!hosts_any_fence(i)) return false;
    }
    return true;
  };
  auto active = [&](int j) {
    if (j == st.j_new) return true;
    if (in_stuck_small(j)) return true;
    const int home = st.schedule.assignment[static_cast<std::size_t>(j)];
    return home >= 0 && undesirable(j, home);
  };
  auto in_tree = [&](int j, int i) {
    for (const auto& b : st.tree)
      if (b.job == j && b.machine == i) return true;
    return false;
  };

  std::vector<PotentialMove> out;
  for (int j = 0; j < n; ++j) {
    if (!active(j)) continue;
    for (int i = 0; i < m; ++i) {
      if (!job_allowed_on(inst.jobs[static_cast<std::size_t>(j)], i)) continue;
      if (on_machine(j, i)) continue;
      if (in_tree(j, i)) continue;
      if (undesirable(j, i)) continue;

      std::int64_t count = 0;
      for (int q = 0; q < n; ++q) count += on_machine(q, i);

      if (small(j)) {
        out.push_back(PotentialMove{j, i, BlockerType::SmallToAny, {1, count}});
        continue;
      }

      Rational stuck_load(0), big_load(0);
      std::int64_t bigs = 0;
      for (int q = 0; q < n; ++q) {
        if (!on_machine(q, i)) continue;
        if (small(q)) {
          if (in_stuck_small(q)) stuck_load += inst.jobs[static_cast<std::size_t>(q)].p;
        } else {
          big_load += inst.jobs[static_cast<std::size_t>(q)].p;
          ++bigs;
        }
      }
      const int mb = min_big_on(i);
      const Rational min_big_p = mb >= 0 ? inst.jobs[static_cast<std::size_t>(mb)].p : Rational(0);
      const Rational& pj = inst.jobs[static_cast<std::size_t>(j)].p;

      const bool to_any = stuck_load + big_load + pj <= bound;
      const bool to_least = stuck_load + min_big_p + pj > bound && stuck_load + pj <= bound;
      const bool to_big = stuck_load + big_load + pj > bound && stuck_load + min_big_p + pj <= bound;
      if (static_cast<int>(to_any) + static_cast<int>(to_least) + static_cast<int>(to_big) > 1)
        throw InvariantViolation("blocker-type conditions are not mutually exclusive");
      if (to_any)
        out.push_back(PotentialMove{j, i, BlockerType::BigToAny, {2, count}});
      else if (to_least)
        out.push_back(PotentialMove{
            j, i, BlockerType::BigToLeast, {3, -static_cast<std::int64_t>(job_number(mb))}});
      else if (to_big)
        out.push_back(PotentialMove{j, i, BlockerType::BigToBig, {4, bigs}});
    }
  }
  return out;
}

}  // namespace rasched::oracle
