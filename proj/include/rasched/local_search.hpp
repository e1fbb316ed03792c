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

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rasched/errors.hpp"
#include "rasched/instance.hpp"

// Blocker-tree local search. A partial schedule is extended one job at a
// time while keeping every machine load at most 11/6 (in the instance scaled
// so the mixture-LP target is 1). Moves that cannot be performed yet are
// parked in an insertion-ordered tree of blockers; each blocker marks jobs
// "undesirable" on its machine, which both activates them for future moves
// and fences the machine against incoming ones. Performing a move deletes
// the tree suffix starting at the blocker that activated the moved job.

namespace rasched::local_search {

// Load ceiling for a valid schedule in scaled units.
inline const Rational& load_bound() {
  static const Rational b(11, 6);
  return b;
}

struct PartialSchedule {
  std::vector<int> assignment;  // job -> machine, -1 = unassigned
  std::vector<Rational> loads;

  static PartialSchedule empty_for(const Instance& inst) {
    PartialSchedule s;
    s.assignment.assign(static_cast<std::size_t>(inst.job_count()), -1);
    s.loads.assign(static_cast<std::size_t>(inst.machine_count), Rational(0));
    return s;
  }

  int machine_of(int j) const { return assignment[static_cast<std::size_t>(j)]; }

  // Reassigns j (possibly from unassigned) and keeps the load cache exact.
  void place(const Instance& inst, int j, int i) {
    const Rational& p = inst.jobs[static_cast<std::size_t>(j)].p;
    const int old = assignment[static_cast<std::size_t>(j)];
    if (old >= 0) loads[static_cast<std::size_t>(old)] -= p;
    assignment[static_cast<std::size_t>(j)] = i;
    loads[static_cast<std::size_t>(i)] += p;
  }

  int assigned_count() const {
    int c = 0;
    for (int a : assignment) c += (a >= 0);
    return c;
  }

  Rational max_load() const {
    Rational best(0);
    for (const Rational& l : loads)
      if (l > best) best = l;
    return best;
  }

  friend bool operator==(const PartialSchedule&, const PartialSchedule&) = default;
};

enum class BlockerType : int {
  SmallToAny = 1,
  BigToAny = 2,
  BigToLeast = 3,
  BigToBig = 4,
};

inline const char* to_string(BlockerType t) {
  switch (t) {
    case BlockerType::SmallToAny: return "small_to_any";
    case BlockerType::BigToAny: return "big_to_any";
    case BlockerType::BigToLeast: return "big_to_least";
    case BlockerType::BigToBig: return "big_to_big";
  }
  return "?";
}

// Compared lexicographically: type rank, then the type-specific tiebreak
// (machine job count, -min big job number, or big job count).
struct MoveValue {
  int rank = 0;
  std::int64_t tiebreak = 0;

  friend auto operator<=>(const MoveValue&, const MoveValue&) = default;
};

struct Blocker {
  int job = -1;
  int machine = -1;
  BlockerType type = BlockerType::SmallToAny;
  MoveValue value;     // frozen at insertion
  int activator = -1;  // index of the activating blocker, -1 = root (job == j_new)

  friend bool operator==(const Blocker&, const Blocker&) = default;
};

struct PotentialMove {
  int job = -1;
  int machine = -1;
  BlockerType type = BlockerType::SmallToAny;
  MoveValue value;

  friend bool operator==(const PotentialMove&, const PotentialMove&) = default;
};

// Single-owner mutable state of one extend call. Plain aggregate so tests
// can stage arbitrary states.
struct SearchState {
  const Instance* inst = nullptr;  // scaled instance
  PartialSchedule schedule;
  std::vector<Blocker> tree;
  int j_new = -1;
};

// Frozen copy of a search state in which neither a valid tree move nor a
// potential move exists; the raw material for infeasibility witnesses.
struct StuckState {
  Instance scaled;
  PartialSchedule schedule;
  std::vector<Blocker> tree;
  int j_new = -1;
  Rational target{1};  // unscaled makespan target this state refutes

  SearchState view() const { return SearchState{&scaled, schedule, tree, j_new}; }
};

namespace detail {

// Everything potential-move evaluation needs, recomputed from scratch —
// correctness over caching at this scale.
struct DerivedViews {
  std::vector<char> hosts_all;    // machine hosts small-to-any or big-to-any
  std::vector<char> hosts_bigs;   // machine hosts big-to-big
  std::vector<char> hosts_least;  // machine hosts big-to-least
  std::vector<std::int64_t> job_count;
  std::vector<Rational> stuck_small_load;  // p(S_i)
  std::vector<Rational> big_load;          // p(B_i)
  std::vector<std::int64_t> big_count;
  std::vector<int> min_big;       // canonical index, -1 if none
  std::vector<char> stuck_small;  // per job: in S
  std::vector<char> active;       // per job: in A
  std::vector<char> move_in_tree;  // j * machines + i
};

inline bool undesirable_with(const DerivedViews& v, const Instance& inst, int j, int i) {
  if (v.hosts_all[static_cast<std::size_t>(i)]) return true;
  if (is_small(inst.jobs[static_cast<std::size_t>(j)].p)) return false;
  if (v.hosts_bigs[static_cast<std::size_t>(i)]) return true;
  return v.hosts_least[static_cast<std::size_t>(i)] &&
         v.min_big[static_cast<std::size_t>(i)] >= 0 &&
         j <= v.min_big[static_cast<std::size_t>(i)];
}

inline DerivedViews derive(const SearchState& st) {
  const Instance& inst = *st.inst;
  const int m = inst.machine_count;
  const int n = inst.job_count();
  DerivedViews v;
  v.hosts_all.assign(static_cast<std::size_t>(m), 0);
  v.hosts_bigs.assign(static_cast<std::size_t>(m), 0);
  v.hosts_least.assign(static_cast<std::size_t>(m), 0);
  v.job_count.assign(static_cast<std::size_t>(m), 0);
  v.stuck_small_load.assign(static_cast<std::size_t>(m), Rational(0));
  v.big_load.assign(static_cast<std::size_t>(m), Rational(0));
  v.big_count.assign(static_cast<std::size_t>(m), 0);
  v.min_big.assign(static_cast<std::size_t>(m), -1);
  v.stuck_small.assign(static_cast<std::size_t>(n), 0);
  v.active.assign(static_cast<std::size_t>(n), 0);
  v.move_in_tree.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0);

  for (const Blocker& b : st.tree) {
    switch (b.type) {
      case BlockerType::SmallToAny:
      case BlockerType::BigToAny: v.hosts_all[static_cast<std::size_t>(b.machine)] = 1; break;
      case BlockerType::BigToBig: v.hosts_bigs[static_cast<std::size_t>(b.machine)] = 1; break;
      case BlockerType::BigToLeast: v.hosts_least[static_cast<std::size_t>(b.machine)] = 1; break;
    }
    v.move_in_tree[static_cast<std::size_t>(b.job) * static_cast<std::size_t>(m) +
                   static_cast<std::size_t>(b.machine)] = 1;
  }

  for (int j = 0; j < n; ++j) {
    const Job& job = inst.jobs[static_cast<std::size_t>(j)];
    const int home = st.schedule.machine_of(j);
    if (home >= 0) {
      v.job_count[static_cast<std::size_t>(home)] += 1;
      if (!is_small(job.p)) {
        v.big_load[static_cast<std::size_t>(home)] += job.p;
        v.big_count[static_cast<std::size_t>(home)] += 1;
        if (v.min_big[static_cast<std::size_t>(home)] < 0)
          v.min_big[static_cast<std::size_t>(home)] = j;  // ascending scan
      }
    }
    if (is_small(job.p)) {
      bool all_fenced = true;
      for (int i : job.allowed) {
        if (i == home) continue;
        if (!v.hosts_all[static_cast<std::size_t>(i)]) {
          all_fenced = false;
          break;
        }
      }
      v.stuck_small[static_cast<std::size_t>(j)] = all_fenced;
    }
  }

  for (int j = 0; j < n; ++j) {
    const int home = st.schedule.machine_of(j);
    if (home >= 0 && v.stuck_small[static_cast<std::size_t>(j)])
      v.stuck_small_load[static_cast<std::size_t>(home)] +=
          inst.jobs[static_cast<std::size_t>(j)].p;
  }

  for (int j = 0; j < n; ++j) {
    const int home = st.schedule.machine_of(j);
    v.active[static_cast<std::size_t>(j)] =
        j == st.j_new || v.stuck_small[static_cast<std::size_t>(j)] ||
        (home >= 0 && undesirable_with(v, inst, j, home));
  }
  return v;
}

}  // namespace detail

// Derived views exposed for inspection and for the witness construction.
inline std::vector<char> stuck_small_jobs(const SearchState& st) {
  return detail::derive(st).stuck_small;
}

inline std::vector<char> active_jobs(const SearchState& st) {
  return detail::derive(st).active;
}

inline bool undesirable_on(const SearchState& st, int j, int i) {
  return detail::undesirable_with(detail::derive(st), *st.inst, j, i);
}

// True iff moving j to i keeps the target load within the bound. The move
// must be well-formed: i allowed for j and different from j's machine.
inline bool is_valid_move(const SearchState& st, int j, int i) {
  const Instance& inst = *st.inst;
  if (j < 0 || j >= inst.job_count() || i < 0 || i >= inst.machine_count)
    throw std::invalid_argument("is_valid_move: index out of range");
  const Job& job = inst.jobs[static_cast<std::size_t>(j)];
  if (!job_allowed_on(job, i) || st.schedule.machine_of(j) == i)
    throw std::invalid_argument("is_valid_move: not a move");
  return st.schedule.loads[static_cast<std::size_t>(i)] + job.p <= load_bound();
}

// All moves of active jobs that may be parked as blockers right now:
// not yet in the tree, target not fenced against the job, and the
// load conditions of exactly one blocker type satisfied. Sorted by
// (job, machine).
inline std::vector<PotentialMove> potential_moves(const SearchState& st) {
  const Instance& inst = *st.inst;
  const detail::DerivedViews v = detail::derive(st);
  const Rational& bound = load_bound();

  std::vector<PotentialMove> out;
  for (int j = 0; j < inst.job_count(); ++j) {
    if (!v.active[static_cast<std::size_t>(j)]) continue;
    const Job& job = inst.jobs[static_cast<std::size_t>(j)];
    const bool small = is_small(job.p);
    for (int i : job.allowed) {
      if (i == st.schedule.machine_of(j)) continue;
      if (v.move_in_tree[static_cast<std::size_t>(j) * static_cast<std::size_t>(inst.machine_count) +
                         static_cast<std::size_t>(i)])
        continue;
      if (detail::undesirable_with(v, inst, j, i)) continue;
      if (small) {
        out.push_back(PotentialMove{j, i, BlockerType::SmallToAny,
                                    {1, v.job_count[static_cast<std::size_t>(i)]}});
        continue;
      }
      const Rational base = v.stuck_small_load[static_cast<std::size_t>(i)] + job.p;
      const int min_big = v.min_big[static_cast<std::size_t>(i)];
      const Rational min_big_p =
          min_big >= 0 ? inst.jobs[static_cast<std::size_t>(min_big)].p : Rational(0);
      if (base + v.big_load[static_cast<std::size_t>(i)] <= bound) {
        out.push_back(PotentialMove{j, i, BlockerType::BigToAny,
                                    {2, v.job_count[static_cast<std::size_t>(i)]}});
      } else if (base + min_big_p <= bound) {
        out.push_back(PotentialMove{j, i, BlockerType::BigToBig,
                                    {4, v.big_count[static_cast<std::size_t>(i)]}});
      } else if (base <= bound) {
        out.push_back(PotentialMove{j, i, BlockerType::BigToLeast,
                                    {3, -static_cast<std::int64_t>(job_number(min_big))}});
      }
      // base > bound: never a potential move.
    }
  }
  return out;
}

// Total order used to pick the blocker to add: the table value refined by
// job then machine index for deterministic replays.
inline bool addition_precedes(const PotentialMove& a, const PotentialMove& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.job != b.job) return a.job < b.job;
  return a.machine < b.machine;
}

namespace detail {

inline bool blocker_marks(const SearchState& st, const Blocker& b, int j) {
  switch (b.type) {
    case BlockerType::SmallToAny:
    case BlockerType::BigToAny: return true;
    case BlockerType::BigToBig: return !is_small(st.inst->jobs[static_cast<std::size_t>(j)].p);
    case BlockerType::BigToLeast: {
      if (is_small(st.inst->jobs[static_cast<std::size_t>(j)].p)) return false;
      int min_big = -1;
      for (int k = 0; k < st.inst->job_count(); ++k) {
        if (st.schedule.machine_of(k) == b.machine &&
            !is_small(st.inst->jobs[static_cast<std::size_t>(k)].p)) {
          min_big = k;
          break;
        }
      }
      return min_big >= 0 && j <= min_big;
    }
  }
  return false;
}

// Earliest-added blocker on the job's machine that marks the job
// undesirable; -1 for the root (job == j_new).
inline int resolve_activator(const SearchState& st, int j) {
  if (j == st.j_new) return -1;
  const int home = st.schedule.machine_of(j);
  if (home < 0)
    throw std::logic_error("blocker job is neither assigned nor the new job");
  for (std::size_t k = 0; k < st.tree.size(); ++k)
    if (st.tree[k].machine == home && blocker_marks(st, st.tree[k], j))
      return static_cast<int>(k);
  throw std::logic_error("no activating blocker for job " + std::to_string(job_number(j)));
}

}  // namespace detail

// Appends `move` as the next blocker. The move must be the minimum of the
// current potential moves; pass them in if already computed.
inline const Blocker& add_blocker(SearchState& st, const PotentialMove& move,
                                  const std::vector<PotentialMove>* known_moves = nullptr) {
  std::vector<PotentialMove> computed;
  const std::vector<PotentialMove>* moves = known_moves;
  if (!moves) {
    computed = potential_moves(st);
    moves = &computed;
  }
  const PotentialMove* best = nullptr;
  bool present = false;
  for (const PotentialMove& pm : *moves) {
    if (pm == move) present = true;
    if (!best || addition_precedes(pm, *best)) best = &pm;
  }
  if (!present || !(*best == move))
    throw std::logic_error("add_blocker: move is not the minimum potential move");
  st.tree.push_back(
      Blocker{move.job, move.machine, move.type, move.value, detail::resolve_activator(st, move.job)});
  return st.tree.back();
}

struct MoveOutcome {
  bool done = false;      // the new job was placed; the extension is finished
  int deleted_from = -1;  // first deleted tree index (the activator), -1 if done
};

// Performs the tree move (j, i): reassigns j and deletes the suffix starting
// at j's activator. Precondition: the move is in the tree and valid (the
// driver picks the valid move whose (activator, position) pair is smallest).
inline MoveOutcome perform_move(SearchState& st, int j, int i) {
  int pos = -1;
  for (std::size_t k = 0; k < st.tree.size(); ++k)
    if (st.tree[k].job == j && st.tree[k].machine == i) pos = static_cast<int>(k);
  if (pos < 0) throw std::invalid_argument("perform_move: move not in tree");
  if (!is_valid_move(st, j, i)) throw std::invalid_argument("perform_move: move not valid");

  st.schedule.place(*st.inst, j, i);
  if (st.schedule.loads[static_cast<std::size_t>(i)] > load_bound())
    throw InvariantViolation("valid move exceeded the load bound");

  if (j == st.j_new) return MoveOutcome{true, -1};
  const int act = st.tree[static_cast<std::size_t>(pos)].activator;
  if (act < 0)
    throw InvariantViolation("non-root blocker without activator performed");
  st.tree.resize(static_cast<std::size_t>(act));
  return MoveOutcome{false, act};
}

// Valid tree move the driver performs next: smallest (activator position,
// own position), with the root counting as before everything.
inline std::optional<std::size_t> select_valid_move(const SearchState& st) {
  std::optional<std::size_t> best;
  auto key = [&](std::size_t k) {
    return std::pair<int, std::size_t>(st.tree[k].activator, k);
  };
  for (std::size_t k = 0; k < st.tree.size(); ++k) {
    const Blocker& b = st.tree[k];
    if (st.schedule.loads[static_cast<std::size_t>(b.machine)] +
            st.inst->jobs[static_cast<std::size_t>(b.job)].p >
        load_bound())
      continue;
    if (!best || key(k) < key(*best)) best = k;
  }
  return best;
}

inline bool is_stuck(const SearchState& st) {
  return !select_valid_move(st) && potential_moves(st).empty();
}

// ---------------------------------------------------------------------------
// Runtime invariant checking (the loop invariants of the analysis).

struct InvariantReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline InvariantReport invariant_report(const SearchState& st) {
  const Instance& inst = *st.inst;
  const int m = inst.machine_count;
  const int n = inst.job_count();
  InvariantReport rep;
  auto fail = [&](const std::string& msg) { rep.violations.push_back(msg); };

  // Schedule shape, allowed sets, exact load cache, validity.
  if (static_cast<int>(st.schedule.assignment.size()) != n ||
      static_cast<int>(st.schedule.loads.size()) != m) {
    fail("schedule dimensions do not match the instance");
    return rep;
  }
  std::vector<Rational> recomputed(static_cast<std::size_t>(m), Rational(0));
  for (int j = 0; j < n; ++j) {
    const int home = st.schedule.machine_of(j);
    if (home < 0) continue;
    if (home >= m || !job_allowed_on(inst.jobs[static_cast<std::size_t>(j)], home))
      fail("job " + std::to_string(job_number(j)) + " assigned outside its allowed set");
    else
      recomputed[static_cast<std::size_t>(home)] += inst.jobs[static_cast<std::size_t>(j)].p;
  }
  for (int i = 0; i < m; ++i) {
    if (recomputed[static_cast<std::size_t>(i)] != st.schedule.loads[static_cast<std::size_t>(i)])
      fail("load cache wrong on machine " + std::to_string(i));
    if (st.schedule.loads[static_cast<std::size_t>(i)] > load_bound())
      fail("machine " + std::to_string(i) + " exceeds the load bound");
  }
  if (st.j_new < 0 || st.j_new >= n)
    fail("new job index out of range");
  else if (st.schedule.machine_of(st.j_new) >= 0)
    fail("new job already assigned");

  // Tree structure: well-formed moves, unique moves, activator links, and
  // one small-/big-to-any blocker per machine across both types.
  std::vector<char> seen_move(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0);
  std::vector<char> any_fence(static_cast<std::size_t>(m), 0);
  for (std::size_t k = 0; k < st.tree.size(); ++k) {
    const Blocker& b = st.tree[k];
    const std::string tag = "blocker " + std::to_string(k + 1);
    if (b.job < 0 || b.job >= n || b.machine < 0 || b.machine >= m) {
      fail(tag + ": indices out of range");
      continue;
    }
    if (!job_allowed_on(inst.jobs[static_cast<std::size_t>(b.job)], b.machine) ||
        st.schedule.machine_of(b.job) == b.machine)
      fail(tag + ": not a move");
    auto& slot = seen_move[static_cast<std::size_t>(b.job) * static_cast<std::size_t>(m) +
                           static_cast<std::size_t>(b.machine)];
    if (slot) fail(tag + ": duplicate move in tree");
    slot = 1;
    if (b.type == BlockerType::SmallToAny || b.type == BlockerType::BigToAny) {
      auto& fence = any_fence[static_cast<std::size_t>(b.machine)];
      if (fence) fail(tag + ": second all-jobs blocker on machine " + std::to_string(b.machine));
      fence = 1;
    }
    if (b.job == st.j_new) {
      if (b.activator != -1) fail(tag + ": new-job blocker must hang off the root");
    } else {
      if (b.activator < 0 || b.activator >= static_cast<int>(k))
        fail(tag + ": activator must precede the blocker");
      else {
        const Blocker& a = st.tree[static_cast<std::size_t>(b.activator)];
        if (a.machine != st.schedule.machine_of(b.job) || !detail::blocker_marks(st, a, b.job))
          fail(tag + ": activator does not mark the job on its machine");
      }
    }
  }
  if (!rep.ok()) return rep;

  // Loop invariants: each blocker's load conditions, re-evaluated against
  // the stuck-small set of its tree prefix and the current big jobs.
  for (std::size_t k = 0; k < st.tree.size(); ++k) {
    const Blocker& b = st.tree[k];
    const std::string tag = "blocker " + std::to_string(k + 1) + " (" + to_string(b.type) + ")";
    std::vector<char> prefix_fence(static_cast<std::size_t>(m), 0);
    for (std::size_t q = 0; q < k; ++q)
      if (st.tree[q].type == BlockerType::SmallToAny || st.tree[q].type == BlockerType::BigToAny)
        prefix_fence[static_cast<std::size_t>(st.tree[q].machine)] = 1;

    Rational prefix_stuck(0);
    for (int j = 0; j < n; ++j) {
      const Job& job = inst.jobs[static_cast<std::size_t>(j)];
      if (!is_small(job.p) || st.schedule.machine_of(j) != b.machine) continue;
      bool fenced = true;
      for (int i : job.allowed) {
        if (i == b.machine) continue;
        if (!prefix_fence[static_cast<std::size_t>(i)]) {
          fenced = false;
          break;
        }
      }
      if (fenced) prefix_stuck += job.p;
    }

    Rational big_total(0), big_min(0);
    bool has_big = false;
    for (int j = 0; j < n; ++j) {
      const Job& job = inst.jobs[static_cast<std::size_t>(j)];
      if (is_small(job.p) || st.schedule.machine_of(j) != b.machine) continue;
      big_total += job.p;
      if (!has_big) {
        big_min = job.p;
        has_big = true;
      }
    }

    const Rational base = prefix_stuck + inst.jobs[static_cast<std::size_t>(b.job)].p;
    switch (b.type) {
      case BlockerType::SmallToAny: break;
      case BlockerType::BigToAny:
        if (base + big_total > load_bound()) fail(tag + ": fit condition lost");
        break;
      case BlockerType::BigToLeast:
        if (base + big_min <= load_bound()) fail(tag + ": least-big overflow condition lost");
        if (base > load_bound()) fail(tag + ": stuck-small fit condition lost");
        break;
      case BlockerType::BigToBig:
        if (base + big_total <= load_bound()) fail(tag + ": all-big overflow condition lost");
        if (base + big_min > load_bound()) fail(tag + ": least-big fit condition lost");
        break;
    }
  }
  return rep;
}

// Throws with a state dump on any violation; clean states pass silently.
inline void check_invariants(const SearchState& st) {
  const InvariantReport rep = invariant_report(st);
  if (rep.ok()) return;
  std::ostringstream dump;
  dump << "search invariants violated:";
  for (const std::string& v : rep.violations) dump << "\n  - " << v;
  dump << "\n  tree:";
  for (std::size_t k = 0; k < st.tree.size(); ++k) {
    const Blocker& b = st.tree[k];
    dump << " [" << k + 1 << ": j" << job_number(b.job) << "->m" << b.machine << " "
         << to_string(b.type) << "]";
  }
  dump << "\n  assignment:";
  for (std::size_t j = 0; j < st.schedule.assignment.size(); ++j)
    dump << " " << st.schedule.assignment[j];
  throw InvariantViolation(dump.str());
}

// ---------------------------------------------------------------------------
// Drivers.

struct TraceEvent {
  enum class Kind { AddBlocker, PerformMove, Stuck };
  Kind kind = Kind::Stuck;
  std::int64_t iteration = 0;
  int job = -1;
  int machine = -1;
  BlockerType type = BlockerType::SmallToAny;  // AddBlocker
  MoveValue value;                             // AddBlocker
  int activator = -1;
  int position = -1;       // 0-based tree position added or performed
  int deleted_from = -1;   // PerformMove: first deleted index
  bool done = false;       // PerformMove placed the new job
  std::size_t tree_size = 0;  // after the event
};

struct SearchOptions {
  bool debug_invariants = false;
  std::int64_t iteration_cap = 1'000'000;
  std::function<void(const TraceEvent&)> trace;
  std::function<void(const SearchState&)> on_iteration;  // fires at each loop top
};

struct ExtendStats {
  std::int64_t iterations = 0;
  std::int64_t blockers_added = 0;
  std::int64_t moves_performed = 0;
};

struct ExtendResult {
  bool completed = false;
  PartialSchedule schedule;
  std::optional<StuckState> stuck;
  ExtendStats stats;
};

// a < b where both value sequences are implicitly followed by a sentinel
// larger than every move value.
inline bool signature_less(const std::vector<MoveValue>& a, const std::vector<MoveValue>& b) {
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < common; ++k)
    if (a[k] != b[k]) return a[k] < b[k];
  return a.size() > b.size();
}

// Places j_new while keeping the schedule valid: performs a valid tree move
// when one exists, otherwise parks the minimum-value potential move as a new
// blocker. Stops either with j_new assigned or with a certified stuck state.
inline ExtendResult extend(const Instance& scaled, const PartialSchedule& start, int j_new,
                           const SearchOptions& opts = {}, const Rational& target = Rational(1)) {
  if (j_new < 0 || j_new >= scaled.job_count())
    throw std::invalid_argument("extend: new job out of range");
  if (start.machine_of(j_new) >= 0)
    throw std::invalid_argument("extend: new job already assigned");
  for (const Rational& l : start.loads)
    if (l > load_bound()) throw std::invalid_argument("extend: starting schedule invalid");

  SearchState st{&scaled, start, {}, j_new};
  ExtendResult res;
  std::vector<MoveValue> last_signature;  // state right after the previous addition

  for (;;) {
    if (++res.stats.iterations > opts.iteration_cap)
      throw IterationCapExceeded("extend exceeded " + std::to_string(opts.iteration_cap) +
                                 " iterations; termination argument broken");
    if (opts.on_iteration) opts.on_iteration(st);
    if (opts.debug_invariants) check_invariants(st);

    if (const auto pos = select_valid_move(st)) {
      const Blocker picked = st.tree[*pos];
      const MoveOutcome out = perform_move(st, picked.job, picked.machine);
      ++res.stats.moves_performed;
      if (opts.trace) {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::PerformMove;
        ev.iteration = res.stats.iterations;
        ev.job = picked.job;
        ev.machine = picked.machine;
        ev.activator = picked.activator;
        ev.position = static_cast<int>(*pos);
        ev.deleted_from = out.deleted_from;
        ev.done = out.done;
        ev.tree_size = st.tree.size();
        opts.trace(ev);
      }
      if (out.done) {
        res.completed = true;
        res.schedule = std::move(st.schedule);
        return res;
      }
      continue;
    }

    const std::vector<PotentialMove> moves = potential_moves(st);
    if (moves.empty()) {
      StuckState stuck{scaled, st.schedule, st.tree, st.j_new, target};
      // Certify the freeze with a fresh evaluation of both conditions.
      if (!is_stuck(stuck.view()))
        throw InvariantViolation("stuck freeze failed re-verification");
      if (opts.trace) {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::Stuck;
        ev.iteration = res.stats.iterations;
        ev.tree_size = st.tree.size();
        opts.trace(ev);
      }
      res.completed = false;
      res.schedule = std::move(st.schedule);
      res.stuck = std::move(stuck);
      return res;
    }

    const PotentialMove* pick = &moves.front();
    for (const PotentialMove& pm : moves)
      if (addition_precedes(pm, *pick)) pick = &pm;
    const Blocker& added = add_blocker(st, *pick, &moves);
    ++res.stats.blockers_added;

    std::vector<MoveValue> signature;
    signature.reserve(st.tree.size());
    for (const Blocker& b : st.tree) signature.push_back(b.value);
    if (!signature_less(signature, last_signature))
      throw InvariantViolation("signature vector did not decrease at a blocker addition");
    last_signature = std::move(signature);

    if (opts.trace) {
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::AddBlocker;
      ev.iteration = res.stats.iterations;
      ev.job = added.job;
      ev.machine = added.machine;
      ev.type = added.type;
      ev.value = added.value;
      ev.activator = added.activator;
      ev.position = static_cast<int>(st.tree.size()) - 1;
      ev.tree_size = st.tree.size();
      opts.trace(ev);
    }
  }
}

enum class InsertionOrder { DescendingSize, InputOrder, Shuffle };

inline std::vector<int> insertion_sequence(const Instance& inst, InsertionOrder order,
                                           std::uint64_t shuffle_seed = 0) {
  std::vector<int> seq(static_cast<std::size_t>(inst.job_count()));
  for (int j = 0; j < inst.job_count(); ++j) seq[static_cast<std::size_t>(j)] = j;
  switch (order) {
    case InsertionOrder::DescendingSize:
      std::stable_sort(seq.begin(), seq.end(), [&](int a, int b) {
        return inst.jobs[static_cast<std::size_t>(a)].p > inst.jobs[static_cast<std::size_t>(b)].p;
      });
      break;
    case InsertionOrder::InputOrder:
      std::sort(seq.begin(), seq.end(), [&](int a, int b) {
        return inst.jobs[static_cast<std::size_t>(a)].original_index <
               inst.jobs[static_cast<std::size_t>(b)].original_index;
      });
      break;
    case InsertionOrder::Shuffle: {
      std::mt19937_64 eng(shuffle_seed);
      for (std::size_t k = seq.size(); k > 1; --k)
        std::swap(seq[k - 1], seq[static_cast<std::size_t>(eng() % k)]);
      break;
    }
  }
  return seq;
}

struct RunOptions : SearchOptions {
  InsertionOrder order = InsertionOrder::DescendingSize;
  std::uint64_t shuffle_seed = 0;
};

struct RunResult {
  bool completed = false;
  Instance scaled;
  PartialSchedule schedule;  // scaled loads; partial when stuck
  std::optional<StuckState> stuck;
  ExtendStats stats;
  Rational T;
  Rational makespan;  // unscaled max load of the returned schedule
};

// Scales the instance by 1/T and inserts every job from the empty schedule.
// A completed run has unscaled makespan at most (11/6)T; a stuck run surfaces
// the certified stuck state together with the partial progress.
inline RunResult run(const Instance& inst, const Rational& T, const RunOptions& opts = {}) {
  if (T <= 0) throw std::invalid_argument("run: T must be positive");
  RunResult res;
  res.T = T;
  res.scaled = scale(inst, T);
  res.schedule = PartialSchedule::empty_for(res.scaled);

  for (int j : insertion_sequence(res.scaled, opts.order, opts.shuffle_seed)) {
    ExtendResult step = extend(res.scaled, res.schedule, j, opts);
    res.stats.iterations += step.stats.iterations;
    res.stats.blockers_added += step.stats.blockers_added;
    res.stats.moves_performed += step.stats.moves_performed;
    // Assigned jobs never get unassigned by an extension.
    for (std::size_t k = 0; k < res.schedule.assignment.size(); ++k)
      if (res.schedule.assignment[k] >= 0 && step.schedule.assignment[k] < 0)
        throw InvariantViolation("extension unassigned a previously placed job");
    res.schedule = std::move(step.schedule);
    if (!step.completed) {
      res.completed = false;
      res.stuck = std::move(step.stuck);
      res.stuck->target = T;
      res.makespan = res.schedule.max_load() * T;
      return res;
    }
  }
  res.completed = true;
  res.makespan = res.schedule.max_load() * T;
  return res;
}

}  // namespace rasched::local_search
