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
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rasched/errors.hpp"
#include "rasched/rational.hpp"

namespace rasched {

// One job after canonicalization. `allowed` is the sorted set of machines
// the job may run on; `original_index` is its position in the input file,
// used for every externally visible index.
struct Job {
  Rational p;
  std::vector<int> allowed;
  int original_index = 0;

  friend bool operator==(const Job&, const Job&) = default;
};

// Jobs are kept sorted by (p, original_index); the canonical index of a job
// is its position in `jobs`, so smaller index never means bigger size. All
// library-level job vectors (assignments, duals, ...) use canonical order.
struct Instance {
  int machine_count = 0;
  std::vector<Job> jobs;

  int job_count() const { return static_cast<int>(jobs.size()); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// 1-based label matching the convention that jobs are natural numbers
// ordered by size. Used in move values and diagnostics.
inline int job_number(int canonical_index) { return canonical_index + 1; }

enum class SizeClass { Small, Big };

// Small means p <= 1/2 in the scaled instance; the boundary is inclusive.
inline SizeClass classify(const Rational& p) {
  static const Rational half(1, 2);
  return p <= half ? SizeClass::Small : SizeClass::Big;
}

inline bool is_small(const Rational& p) { return classify(p) == SizeClass::Small; }

// Validates jobs and sorts them into canonical order. Positions reported in
// errors are original input positions.
inline Instance make_instance(int machine_count, std::vector<Job> jobs) {
  if (machine_count < 1) throw ParseError("machine count must be at least 1");
  if (jobs.empty()) throw ParseError("at least one job is required");
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    Job& j = jobs[k];
    const std::string where = "job " + std::to_string(j.original_index);
    if (j.p <= 0) throw ParseError(where + ": processing time must be positive");
    std::sort(j.allowed.begin(), j.allowed.end());
    j.allowed.erase(std::unique(j.allowed.begin(), j.allowed.end()), j.allowed.end());
    if (j.allowed.empty()) throw ParseError(where + ": allowed machine set is empty");
    if (j.allowed.front() < 0 || j.allowed.back() >= machine_count)
      throw ParseError(where + ": machine index out of range");
  }
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.original_index < b.original_index;
  });
  return Instance{machine_count, std::move(jobs)};
}

// Divides every processing time by T; job order and allowed sets are
// untouched (dividing by a positive constant preserves the order).
inline Instance scale(const Instance& inst, const Rational& T) {
  if (T <= 0) throw std::invalid_argument("scale: T must be positive");
  Instance out = inst;
  for (Job& j : out.jobs) j.p /= T;
  return out;
}

inline bool job_allowed_on(const Job& j, int machine) {
  return std::binary_search(j.allowed.begin(), j.allowed.end(), machine);
}

// Seeded random instances. One anchor machine is always allowed; every other
// machine joins independently with probability `density`. Draws use the raw
// engine so outputs are identical across standard libraries.
inline Instance generate_random(int machines, int jobs,
                                const std::vector<Rational>& size_grid,
                                const Rational& density, std::uint64_t seed) {
  if (machines < 1) throw std::invalid_argument("generate_random: machines must be >= 1");
  if (jobs < 1) throw std::invalid_argument("generate_random: jobs must be >= 1");
  if (size_grid.empty()) throw std::invalid_argument("generate_random: empty size grid");
  for (const Rational& s : size_grid)
    if (s <= 0) throw std::invalid_argument("generate_random: sizes must be positive");
  if (density <= 0 || density > 1)
    throw std::invalid_argument("generate_random: density must be in (0, 1]");

  std::mt19937_64 eng(seed);
  const auto num = static_cast<std::uint64_t>(numerator(density));
  const auto den = static_cast<std::uint64_t>(denominator(density));

  std::vector<Job> out;
  out.reserve(static_cast<std::size_t>(jobs));
  for (int k = 0; k < jobs; ++k) {
    Job j;
    j.original_index = k;
    j.p = size_grid[static_cast<std::size_t>(eng() % size_grid.size())];
    const int anchor = static_cast<int>(eng() % static_cast<std::uint64_t>(machines));
    j.allowed.push_back(anchor);
    for (int i = 0; i < machines; ++i) {
      if (i == anchor) continue;
      if (eng() % den < num) j.allowed.push_back(i);
    }
    out.push_back(std::move(j));
  }
  return make_instance(machines, std::move(out));
}

// Default size profile: the six-step grid 1/6 .. 1.
inline std::vector<Rational> sixths_grid() {
  std::vector<Rational> g;
  for (int k = 1; k <= 6; ++k) g.emplace_back(k, 6);
  return g;
}

}  // namespace rasched
