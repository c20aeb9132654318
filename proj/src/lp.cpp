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

#include "csgcheck/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csgcheck/error.hpp"

namespace csg {
namespace {

constexpr double kCostTolerance = 1e-9;
// Tableau entries this small after a pivot are cancellation noise.
constexpr double kRoundoff = 1e-12;
constexpr double kRatioSlack = 1e-9;
constexpr int kDegenerateLimit = 50;
constexpr int kRefactorInterval = 50;
constexpr double kSingularPivot = 1e-11;
constexpr double kRelativePivot = 1e-8;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// How an original variable is expressed through nonnegative columns.
struct VarMap {
  enum Kind { kShift, kReflect, kFree } kind;
  int column;   // first standardized column
  double base;  // l for kShift, u for kReflect
};

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return t_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double& cost(int c) { return at(rows_, c); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pr, int pc) {
    double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) {
        double& x = at(r, c);
        x -= f * at(pr, c);
        if (std::abs(x) < kRoundoff) x = 0.0;
      }
      at(r, pc) = 0.0;
    }
  }

  void drop_row(int r) {
    for (int i = r; i < rows_; ++i) {
      std::copy_n(&at(i + 1, 0), cols_ + 1, &at(i, 0));
    }
    --rows_;
    t_.resize((rows_ + 1) * (cols_ + 1));
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> t_;
};

enum class Outcome { kOptimal, kUnbounded };

void load_costs(Tableau& tab, const std::vector<int>& basis, const std::vector<double>& c) {
  for (int j = 0; j <= tab.cols(); ++j) tab.cost(j) = j < tab.cols() ? c[j] : 0.0;
  for (int r = 0; r < tab.rows(); ++r) {
    double cb = c[basis[r]];
    if (cb == 0.0) continue;
    for (int j = 0; j <= tab.cols(); ++j) tab.cost(j) -= cb * tab.at(r, j);
  }
}

// Dense simplex state. `orig` keeps the constraint rows as first loaded so
// the tableau can be rebuilt from the current basis, which discards the
// round-off that pivoting accumulates.
struct Simplex {
  Tableau tab;
  Tableau orig;
  std::vector<int> basis;
  std::vector<int> init_basis;  // column that was basic in each original row
  std::vector<char> allowed;
  std::vector<double> costs;
  int pivots = 0;
  int budget = 0;

  // Recomputes B^-1 [A | b] by Gaussian elimination with partial pivoting.
  // Leaves the tableau alone if the basis matrix looks singular.
  bool refactor() {
    const int m = tab.rows(), w = tab.cols() + 1;
    std::vector<double> aug(static_cast<std::size_t>(m) * (m + w));
    auto at = [&](int r, int c) -> double& { return aug[static_cast<std::size_t>(r) * (m + w) + c]; };
    for (int r = 0; r < m; ++r) {
      for (int k = 0; k < m; ++k) at(r, k) = orig.at(r, basis[k]);
      for (int c = 0; c < w; ++c) at(r, m + c) = orig.at(r, c);
    }
    for (int k = 0; k < m; ++k) {
      int p = k;
      for (int r = k + 1; r < m; ++r) {
        if (std::abs(at(r, k)) > std::abs(at(p, k))) p = r;
      }
      if (std::abs(at(p, k)) < kSingularPivot) return false;
      if (p != k) {
        for (int c = 0; c < m + w; ++c) std::swap(at(p, c), at(k, c));
      }
      double inv = 1.0 / at(k, k);
      for (int c = k; c < m + w; ++c) at(k, c) *= inv;
      for (int r = 0; r < m; ++r) {
        if (r == k) continue;
        double f = at(r, k);
        if (f == 0.0) continue;
        for (int c = k; c < m + w; ++c) at(r, c) -= f * at(k, c);
      }
    }
    // Row k of the solved system belongs to basis[k].
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < w; ++c) {
        double x = at(r, m + c);
        tab.at(r, c) = std::abs(x) < kRoundoff ? 0.0 : x;
      }
      tab.at(r, basis[r]) = 1.0;
    }
    load_costs(tab, basis, costs);
    return true;
  }

  // Removes tableau row r (an artificial basic variable with an all-zero
  // structural row) together with an original row that makes the remaining
  // basis matrix nonsingular.
  void drop_redundant(int r) {
    int victim = 0;
    for (int i = 1; i < orig.rows(); ++i) {
      if (std::abs(tab.at(r, init_basis[i])) > std::abs(tab.at(r, init_basis[victim]))) victim = i;
    }
    tab.drop_row(r);
    basis.erase(basis.begin() + r);
    orig.drop_row(victim);
    init_basis.erase(init_basis.begin() + victim);
  }

  // Maximizes `costs`.
  Outcome run() {
    load_costs(tab, basis, costs);
    int degenerate = 0;
    int steps = 0;  // since the last refactorization
    int total = 0;
    bool bland = false;
    while (true) {
      int enter = -1;
      for (int c = 0; c < tab.cols(); ++c) {
        if (allowed[c] && tab.cost(c) > kCostTolerance) {
          enter = c;
          break;
        }
      }
      if (enter < 0) {
        // Confirm optimality on a freshly factored tableau.
        if (steps % kRefactorInterval == 0 || !refactor()) return Outcome::kOptimal;
        steps = 0;
        bool improving = false;
        for (int c = 0; c < tab.cols() && !improving; ++c) improving = allowed[c] && tab.cost(c) > kCostTolerance;
        if (!improving) return Outcome::kOptimal;
        continue;
      }
      // Two-pass ratio test: bound the step with a small feasibility slack,
      // then take the largest pivot among rows within that bound. After a
      // long run of degenerate pivots, or too many pivots overall, switch to
      // Bland's rule for good: exact minimum ratio, ties to the smallest
      // basic index.
      if (degenerate > kDegenerateLimit || total > 20 * (tab.rows() + tab.cols())) bland = true;
      // Entries tiny next to the column's largest are treated as zero.
      double colmax = 0.0;
      for (int r = 0; r < tab.rows(); ++r) colmax = std::max(colmax, std::abs(tab.at(r, enter)));
      const double tiny = std::max(kPivotTolerance, kRelativePivot * colmax);
      int leave = -1;
      double bound = kInfinity;
      for (int r = 0; r < tab.rows(); ++r) {
        double a = tab.at(r, enter);
        if (a <= tiny) continue;
        double ratio = bland ? std::max(tab.rhs(r), 0.0) / a : (std::max(tab.rhs(r), 0.0) + kRatioSlack) / a;
        bound = std::min(bound, ratio);
      }
      if (bland) bound += kRoundoff * (1.0 + bound);
      double best = 0.0;
      for (int r = 0; r < tab.rows(); ++r) {
        double a = tab.at(r, enter);
        if (a <= tiny || std::max(tab.rhs(r), 0.0) / a > bound) continue;
        bool take = leave < 0 || (bland ? basis[r] < basis[leave] : a > best);
        if (take) {
          leave = r;
          best = a;
        }
      }
      if (leave < 0) return Outcome::kUnbounded;
      degenerate = tab.rhs(leave) <= kRatioSlack ? degenerate + 1 : 0;
      // A slightly negative basic value would step backwards; treat it as zero.
      if (tab.rhs(leave) < 0.0) tab.rhs(leave) = 0.0;
      tab.pivot(leave, enter);
      basis[leave] = enter;
      ++total;
      if (++pivots > budget) throw SolverError("simplex pivot budget exhausted");
      if (++steps % kRefactorInterval == 0) refactor();
    }
  }
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
  const int n = lp.num_variables();
  if (static_cast<int>(lp.lower.size()) != n || static_cast<int>(lp.upper.size()) != n) {
    throw InputError("LP bound vectors do not match the variable count");
  }
  for (const auto& row : lp.constraints) {
    if (static_cast<int>(row.coeffs.size()) != n) throw InputError("LP row width mismatch");
    for (double a : row.coeffs) {
      if (!std::isfinite(a)) throw InputError("non-finite LP coefficient");
    }
    if (!std::isfinite(row.rhs)) throw InputError("non-finite LP right-hand side");
  }
  for (double c : lp.objective) {
    if (!std::isfinite(c)) throw InputError("non-finite LP objective coefficient");
  }

  // Map original variables to nonnegative columns.
  std::vector<VarMap> vars(n);
  int structural = 0;
  struct Row {
    std::vector<double> a;
    Relation rel;
    double b;
  };
  std::vector<Row> rows;
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower[j], hi = lp.upper[j];
    if (lo > hi) {
      return {LpStatus::kInfeasible, {}, 0.0, 0};
    }
    if (std::isfinite(lo)) {
      vars[j] = {VarMap::kShift, structural++, lo};
    } else if (std::isfinite(hi)) {
      vars[j] = {VarMap::kReflect, structural++, hi};
    } else {
      vars[j] = {VarMap::kFree, structural, 0.0};
      structural += 2;
    }
  }
  auto expand = [&](const std::vector<double>& coeffs, double& constant) {
    std::vector<double> out(structural, 0.0);
    for (int j = 0; j < n; ++j) {
      double a = coeffs[j];
      if (a == 0.0) continue;
      switch (vars[j].kind) {
        case VarMap::kShift:
          out[vars[j].column] += a;
          constant += a * vars[j].base;
          break;
        case VarMap::kReflect:
          out[vars[j].column] -= a;
          constant += a * vars[j].base;
          break;
        case VarMap::kFree:
          out[vars[j].column] += a;
          out[vars[j].column + 1] -= a;
          break;
      }
    }
    return out;
  };
  for (const auto& con : lp.constraints) {
    double constant = 0.0;
    auto a = expand(con.coeffs, constant);
    rows.push_back({std::move(a), con.relation, con.rhs - constant});
  }
  for (int j = 0; j < n; ++j) {
    if (vars[j].kind == VarMap::kShift && std::isfinite(lp.upper[j])) {
      std::vector<double> a(structural, 0.0);
      a[vars[j].column] = 1.0;
      rows.push_back({std::move(a), Relation::kLessEqual, lp.upper[j] - lp.lower[j]});
    }
  }
  for (auto& row : rows) {
    // Homogeneous >= rows become <= rows and need no artificial.
    if (row.b < 0 || (row.b == 0 && row.rel == Relation::kGreaterEqual)) {
      for (double& v : row.a) v = -v;
      row.b = -row.b;
      if (row.rel == Relation::kLessEqual) {
        row.rel = Relation::kGreaterEqual;
      } else if (row.rel == Relation::kGreaterEqual) {
        row.rel = Relation::kLessEqual;
      }
    }
  }

  const int m = static_cast<int>(rows.size());
  int slack_count = 0, art_count = 0;
  for (const auto& row : rows) {
    if (row.rel != Relation::kEqual) ++slack_count;
    if (row.rel != Relation::kLessEqual) ++art_count;
  }
  const int cols = structural + slack_count + art_count;
  const int first_art = structural + slack_count;
  Simplex sx{Tableau(m, cols), Tableau(m, cols), std::vector<int>(m), {}, std::vector<char>(cols, 1), {}, 0, 0};
  Tableau& tab = sx.tab;
  std::vector<int>& basis = sx.basis;
  int slack = structural, art = first_art;
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < structural; ++j) tab.at(r, j) = rows[r].a[j];
    tab.rhs(r) = rows[r].b;
    switch (rows[r].rel) {
      case Relation::kLessEqual:
        tab.at(r, slack) = 1.0;
        basis[r] = slack++;
        break;
      case Relation::kGreaterEqual:
        tab.at(r, slack++) = -1.0;
        tab.at(r, art) = 1.0;
        basis[r] = art++;
        break;
      case Relation::kEqual:
        tab.at(r, art) = 1.0;
        basis[r] = art++;
        break;
    }
  }
  sx.orig = tab;
  sx.init_basis = basis;
  sx.budget = 50000 + 200 * (m + cols);

  if (art_count > 0) {
    sx.costs.assign(cols, 0.0);
    for (int j = first_art; j < cols; ++j) sx.costs[j] = -1.0;
    sx.run();
    double scale = 1.0;
    for (const auto& row : rows) scale = std::max(scale, std::abs(row.b));
    // The cost row's last entry holds the remaining artificial mass.
    if (tab.cost(cols) > 1e-9 * scale) {
      return {LpStatus::kInfeasible, {}, 0.0, sx.pivots};
    }
    // Drive remaining (zero-level) artificials out of the basis.
    for (int r = 0; r < tab.rows();) {
      if (basis[r] < first_art) {
        ++r;
        continue;
      }
      int col = -1;
      for (int j = 0; j < first_art; ++j) {
        if (std::abs(tab.at(r, j)) > kPivotTolerance && (col < 0 || std::abs(tab.at(r, j)) > std::abs(tab.at(r, col)))) {
          col = j;
        }
      }
      if (col < 0) {
        sx.drop_redundant(r);
        continue;
      }
      tab.pivot(r, col);
      basis[r] = col;
      ++r;
    }
    for (int j = first_art; j < cols; ++j) sx.allowed[j] = 0;
  }

  double sign = lp.sense == Sense::kMaximize ? 1.0 : -1.0;
  double obj_const = 0.0;
  auto c_std = expand(lp.objective, obj_const);
  sx.costs.assign(cols, 0.0);
  for (int j = 0; j < structural; ++j) sx.costs[j] = sign * c_std[j];
  sx.refactor();
  if (sx.run() == Outcome::kUnbounded) {
    return {LpStatus::kUnbounded, {}, 0.0, sx.pivots};
  }
  const int pivots = sx.pivots;

  std::vector<double> y(cols, 0.0);
  for (int r = 0; r < tab.rows(); ++r) y[basis[r]] = std::max(tab.rhs(r), 0.0);
  LpResult result;
  result.status = LpStatus::kOptimal;
  result.pivots = pivots;
  result.x.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto& v = vars[j];
    switch (v.kind) {
      case VarMap::kShift:
        result.x[j] = v.base + y[v.column];
        break;
      case VarMap::kReflect:
        result.x[j] = v.base - y[v.column];
        break;
      case VarMap::kFree:
        result.x[j] = y[v.column] - y[v.column + 1];
        break;
    }
  }
  result.objective = 0.0;
  for (int j = 0; j < n; ++j) result.objective += lp.objective[j] * result.x[j];
  return result;
}

}  // namespace csg
