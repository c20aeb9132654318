// Copyright 2026 The csgcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csgcheck/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csgcheck/error.hpp"
#include "csgcheck/lp.hpp"

namespace csg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MixedStrategy pure(int size, int at) {
  MixedStrategy s(size, 0.0);
  s[at] = 1.0;
  return s;
}

// Finite matrix, nonempty.
GameSolution solve_finite(const Matrix& z, bool need_column) {
  const int rows = static_cast<int>(z.size());
  const int cols = static_cast<int>(z[0].size());

  // Pure saddle point: the maximin row meets the minimax column.
  int best_row = 0, best_col = 0;
  double maximin = -kInf, minimax = kInf;
  for (int i = 0; i < rows; ++i) {
    double m = *std::min_element(z[i].begin(), z[i].end());
    if (m > maximin) {
      maximin = m;
      best_row = i;
    }
  }
  for (int j = 0; j < cols; ++j) {
    double m = -kInf;
    for (int i = 0; i < rows; ++i) m = std::max(m, z[i][j]);
    if (m < minimax) {
      minimax = m;
      best_col = j;
    }
  }
  if (maximin == minimax) {
    return {maximin, pure(rows, best_row), pure(cols, best_col)};
  }

  double lo = kInf;
  for (const auto& row : z) lo = std::min(lo, *std::min_element(row.begin(), row.end()));
  const double shift = 1.0 - lo;

  // min sum p  s.t.  sum_i p_i (z_ij + c) >= 1,  p >= 0;  value = 1 / sum p.
  LinearProgram primal(rows, Sense::kMinimize);
  std::fill(primal.objective.begin(), primal.objective.end(), 1.0);
  for (int j = 0; j < cols; ++j) {
    std::vector<double> a(rows);
    for (int i = 0; i < rows; ++i) a[i] = z[i][j] + shift;
    primal.add(std::move(a), Relation::kGreaterEqual, 1.0);
  }
  LpResult p = lp_solve(primal);
  if (p.status != LpStatus::kOptimal || p.objective <= 0) {
    throw SolverError("matrix game LP failed");
  }
  GameSolution sol;
  sol.value = 1.0 / p.objective - shift;
  sol.row.resize(rows);
  double total = 0.0;
  for (int i = 0; i < rows; ++i) total += std::max(0.0, p.x[i]);
  for (int i = 0; i < rows; ++i) sol.row[i] = std::max(0.0, p.x[i]) / total;

  if (need_column) {
    // max sum q  s.t.  sum_j (z_ij + c) q_j <= 1,  q >= 0.
    LinearProgram dual(cols, Sense::kMaximize);
    std::fill(dual.objective.begin(), dual.objective.end(), 1.0);
    for (int i = 0; i < rows; ++i) {
      std::vector<double> a(cols);
      for (int j = 0; j < cols; ++j) a[j] = z[i][j] + shift;
      dual.add(std::move(a), Relation::kLessEqual, 1.0);
    }
    LpResult q = lp_solve(dual);
    if (q.status != LpStatus::kOptimal || q.objective <= 0) {
      throw SolverError("matrix game dual LP failed");
    }
    sol.col.resize(cols);
    double qt = 0.0;
    for (int j = 0; j < cols; ++j) qt += std::max(0.0, q.x[j]);
    for (int j = 0; j < cols; ++j) sol.col[j] = std::max(0.0, q.x[j]) / qt;
  }
  return sol;
}

}  // namespace

GameSolution solve_matrix_game(const Matrix& z, bool need_column) {
  if (z.empty() || z[0].empty()) throw InputError("empty matrix game");
  const int rows = static_cast<int>(z.size());
  const int cols = static_cast<int>(z[0].size());
  for (const auto& row : z) {
    if (static_cast<int>(row.size()) != cols) throw InputError("ragged matrix game");
    for (double v : row) {
      if (std::isnan(v)) throw InputError("NaN in matrix game");
    }
  }

  std::vector<int> safe_cols;
  for (int j = 0; j < cols; ++j) {
    bool safe = true;
    for (int i = 0; i < rows; ++i) safe = safe && z[i][j] != kInf;
    if (safe) safe_cols.push_back(j);
  }
  if (safe_cols.empty()) return {kInf, pure(rows, 0), pure(cols, 0)};
  std::vector<int> safe_rows;
  for (int i = 0; i < rows; ++i) {
    bool safe = true;
    for (int j : safe_cols) safe = safe && z[i][j] != -kInf;
    if (safe) safe_rows.push_back(i);
  }
  if (safe_rows.empty()) return {-kInf, pure(rows, 0), pure(cols, 0)};
  if (static_cast<int>(safe_cols.size()) == cols && static_cast<int>(safe_rows.size()) == rows) {
    return solve_finite(z, need_column);
  }

  Matrix sub(safe_rows.size(), std::vector<double>(safe_cols.size()));
  for (std::size_t i = 0; i < safe_rows.size(); ++i) {
    for (std::size_t j = 0; j < safe_cols.size(); ++j) sub[i][j] = z[safe_rows[i]][safe_cols[j]];
  }
  GameSolution part = solve_finite(sub, need_column);
  GameSolution sol{part.value, MixedStrategy(rows, 0.0), MixedStrategy(cols, 0.0)};
  for (std::size_t i = 0; i < safe_rows.size(); ++i) sol.row[safe_rows[i]] = part.row[i];
  if (need_column) {
    for (std::size_t j = 0; j < safe_cols.size(); ++j) sol.col[safe_cols[j]] = part.col[j];
  } else {
    sol.col.clear();
  }
  return sol;
}

double security_level(const Matrix& z, const MixedStrategy& row) {
  double worst = kInf;
  for (std::size_t j = 0; j < z[0].size(); ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (row[i] > 0) v += row[i] * z[i][j];
    }
    worst = std::min(worst, v);
  }
  return worst;
}

double column_guarantee(const Matrix& z, const MixedStrategy& col) {
  double worst = -kInf;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < z[i].size(); ++j) {
      if (col[j] > 0) v += col[j] * z[i][j];
    }
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace csg
