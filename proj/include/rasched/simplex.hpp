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

#include <cstddef>
#include <optional>
#include <vector>

#include "rasched/errors.hpp"
#include "rasched/rational.hpp"

namespace rasched::simplex {

// Feasibility of a 0/1 "mixture cover" system
//
//     sum of x over columns touching packing row i   <= 1   (i = 0..packing-1)
//     sum of x over columns touching covering row r  >= 1   (r = 0..covering-1)
//     x >= 0
//
// solved by exact phase-1 simplex with Bland's rule (entering: lowest-index
// column with negative reduced cost; leaving: lowest-index basic on ratio
// ties). Every column holds coefficient 1 in at most one packing row and any
// set of covering rows.
//
// On infeasibility the reduced costs of the slack and surplus columns give
// the Farkas prices: packing_price >= 0, covering_price in [0,1], with
// covering_price(rows of any column) <= packing_price(its packing row) and
// sum(covering_price) > sum(packing_price).
struct CoverColumn {
  std::optional<int> packing_row;
  std::vector<int> covering_rows;  // strictly ascending
};

struct CoverSystem {
  int packing_rows = 0;
  int covering_rows = 0;
  std::vector<CoverColumn> columns;
};

struct CoverResult {
  bool feasible = false;
  std::vector<Rational> x;               // per structural column (feasible only)
  std::vector<Rational> packing_price;   // infeasible only
  std::vector<Rational> covering_price;  // infeasible only
};

inline CoverResult phase1_feasible(const CoverSystem& sys) {
  const int m = sys.packing_rows;
  const int n = sys.covering_rows;
  const int rows = m + n;
  const int structural = static_cast<int>(sys.columns.size());
  // Column layout: structural | slack (packing) | surplus | artificial.
  const int slack0 = structural;
  const int surplus0 = slack0 + m;
  const int art0 = surplus0 + n;
  const int cols = art0 + n;

  std::vector<std::vector<Rational>> t(
      static_cast<std::size_t>(rows),
      std::vector<Rational>(static_cast<std::size_t>(cols) + 1));
  for (int c = 0; c < structural; ++c) {
    const CoverColumn& col = sys.columns[static_cast<std::size_t>(c)];
    if (col.packing_row) t[static_cast<std::size_t>(*col.packing_row)][static_cast<std::size_t>(c)] = 1;
    for (int r : col.covering_rows)
      t[static_cast<std::size_t>(m + r)][static_cast<std::size_t>(c)] = 1;
  }
  for (int i = 0; i < m; ++i) t[static_cast<std::size_t>(i)][static_cast<std::size_t>(slack0 + i)] = 1;
  for (int r = 0; r < n; ++r) {
    t[static_cast<std::size_t>(m + r)][static_cast<std::size_t>(surplus0 + r)] = -1;
    t[static_cast<std::size_t>(m + r)][static_cast<std::size_t>(art0 + r)] = 1;
  }
  for (int r = 0; r < rows; ++r) t[static_cast<std::size_t>(r)].back() = 1;

  std::vector<int> basis(static_cast<std::size_t>(rows));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = slack0 + i;
  for (int r = 0; r < n; ++r) basis[static_cast<std::size_t>(m + r)] = art0 + r;

  // Objective row for min(sum of artificials), already reduced against the
  // starting basis; obj.back() holds -objective_value.
  std::vector<Rational> obj(static_cast<std::size_t>(cols) + 1);
  for (int c = 0; c < structural; ++c)
    obj[static_cast<std::size_t>(c)] =
        -Rational(static_cast<int>(sys.columns[static_cast<std::size_t>(c)].covering_rows.size()));
  for (int r = 0; r < n; ++r) obj[static_cast<std::size_t>(surplus0 + r)] = 1;
  obj.back() = -Rational(n);

  for (;;) {
    int enter = -1;
    for (int c = 0; c < cols; ++c) {
      if (obj[static_cast<std::size_t>(c)] < 0) {
        enter = c;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    Rational best;
    for (int r = 0; r < rows; ++r) {
      const Rational& coef = t[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
      if (coef <= 0) continue;
      Rational ratio = t[static_cast<std::size_t>(r)].back() / coef;
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0)
      throw InvariantViolation("phase-1 objective unbounded; tableau corrupted");

    auto& prow = t[static_cast<std::size_t>(leave)];
    const Rational pivot = prow[static_cast<std::size_t>(enter)];
    for (auto& v : prow) v /= pivot;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      auto& row = t[static_cast<std::size_t>(r)];
      const Rational factor = row[static_cast<std::size_t>(enter)];
      if (factor == 0) continue;
      for (std::size_t c = 0; c < row.size(); ++c) row[c] -= factor * prow[c];
    }
    const Rational ofac = obj[static_cast<std::size_t>(enter)];
    if (ofac != 0)
      for (std::size_t c = 0; c < obj.size(); ++c) obj[c] -= ofac * prow[c];
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  CoverResult res;
  const Rational objective = -obj.back();
  if (objective == 0) {
    res.feasible = true;
    res.x.assign(static_cast<std::size_t>(structural), Rational(0));
    for (int r = 0; r < rows; ++r)
      if (basis[static_cast<std::size_t>(r)] < structural)
        res.x[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] =
            t[static_cast<std::size_t>(r)].back();
    return res;
  }

  res.feasible = false;
  res.packing_price.reserve(static_cast<std::size_t>(m));
  res.covering_price.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i)
    res.packing_price.push_back(obj[static_cast<std::size_t>(slack0 + i)]);
  for (int r = 0; r < n; ++r)
    res.covering_price.push_back(obj[static_cast<std::size_t>(surplus0 + r)]);
  // Consistency of the two ways to read the covering prices, and the
  // strictly positive infeasibility gap.
  Rational gap;
  for (int r = 0; r < n; ++r) {
    if (res.covering_price[static_cast<std::size_t>(r)] !=
        1 - obj[static_cast<std::size_t>(art0 + r)])
      throw InvariantViolation("phase-1 dual prices inconsistent");
    gap += res.covering_price[static_cast<std::size_t>(r)];
  }
  for (int i = 0; i < m; ++i) gap -= res.packing_price[static_cast<std::size_t>(i)];
  if (gap != objective)
    throw InvariantViolation("phase-1 Farkas gap does not match objective");
  return res;
}

}  // namespace rasched::simplex
