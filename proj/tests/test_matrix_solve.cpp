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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "csgcheck/error.hpp"
#include "csgcheck/linear_solve.hpp"
#include "csgcheck/lp.hpp"
#include "csgcheck/matrix_game.hpp"
#include "support.hpp"

namespace csg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Lp, SolvesSmallMaximization) {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
  LinearProgram lp(2);
  lp.objective = {3, 2};
  lp.add({1, 1}, Relation::kLessEqual, 4);
  lp.add({1, 3}, Relation::kLessEqual, 6);
  lp.upper[0] = 3;
  auto r = lp_solve(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 11.0, 1e-9);
  EXPECT_NEAR(r.x[0], 3.0, 1e-9);
  EXPECT_NEAR(r.x[1], 1.0, 1e-9);
}

TEST(Lp, EqualityAndGreaterRowsNeedPhaseOne) {
  // min x + y  s.t. x + 2y >= 4, x - y = 1
  LinearProgram lp(2, Sense::kMinimize);
  lp.objective = {1, 1};
  lp.add({1, 2}, Relation::kGreaterEqual, 4);
  lp.add({1, -1}, Relation::kEqual, 1);
  auto r = lp_solve(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.x[0], 2.0, 1e-9);
  EXPECT_NEAR(r.x[1], 1.0, 1e-9);
}

TEST(Lp, FreeVariables) {
  // min v  s.t. v >= -3 - x, v >= x - 1, x free in [-5, 5]
  LinearProgram lp(2, Sense::kMinimize);
  lp.lower = {-5, -kInf};
  lp.upper = {5, kInf};
  lp.objective = {0, 1};
  lp.add({1, 1}, Relation::kGreaterEqual, -3);
  lp.add({-1, 1}, Relation::kGreaterEqual, -1);
  auto r = lp_solve(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -2.0, 1e-9);
}

TEST(Lp, DetectsInfeasibleAndUnbounded) {
  LinearProgram bad(1);
  bad.objective = {1};
  bad.add({1}, Relation::kLessEqual, 1);
  bad.add({1}, Relation::kGreaterEqual, 2);
  EXPECT_EQ(lp_solve(bad).status, LpStatus::kInfeasible);
  LinearProgram open(1);
  open.objective = {1};
  open.add({-1}, Relation::kLessEqual, 1);
  EXPECT_EQ(lp_solve(open).status, LpStatus::kUnbounded);
}

TEST(Lp, RejectsNonFiniteData) {
  LinearProgram lp(1);
  lp.add({kInf}, Relation::kLessEqual, 1);
  EXPECT_THROW(lp_solve(lp), InputError);
}

TEST(Lp, RandomFeasibleProgramsSatisfyConstraints) {
  testing::Gen gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.uniform_int(1, 5), m = gen.uniform_int(1, 6);
    LinearProgram lp(n);
    for (auto& c : lp.objective) c = gen.uniform(-1, 1);
    // A box keeps every program bounded; x = 0 keeps it feasible.
    for (int j = 0; j < n; ++j) lp.upper[j] = gen.uniform(0.5, 3);
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(n);
      for (auto& a : row) a = gen.uniform(-2, 2);
      lp.add(row, Relation::kLessEqual, gen.uniform(0, 3));
    }
    auto r = lp_solve(lp);
    ASSERT_EQ(r.status, LpStatus::kOptimal);
    for (const auto& con : lp.constraints) {
      double lhs = 0;
      for (int j = 0; j < n; ++j) lhs += con.coeffs[j] * r.x[j];
      EXPECT_LE(lhs, con.rhs + 1e-7);
    }
    // Optimality against random feasible points.
    for (int probe = 0; probe < 20; ++probe) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) x[j] = gen.uniform(0, lp.upper[j]);
      bool feasible = true;
      for (const auto& con : lp.constraints) {
        double lhs = 0;
        for (int j = 0; j < n; ++j) lhs += con.coeffs[j] * x[j];
        feasible = feasible && lhs <= con.rhs;
      }
      if (!feasible) continue;
      double obj = 0;
      for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
      EXPECT_LE(obj, r.objective + 1e-7);
    }
  }
}

TEST(MatrixGame, MatchingPennies) {
  auto sol = solve_matrix_game({{1, -1}, {-1, 1}});
  EXPECT_NEAR(sol.value, 0.0, 1e-9);
  EXPECT_NEAR(sol.row[0], 0.5, 1e-8);
  EXPECT_NEAR(sol.col[0], 0.5, 1e-8);
}

TEST(MatrixGame, MixedTwoByTwo) {
  auto sol = solve_matrix_game({{3, 1}, {0, 2}});
  EXPECT_NEAR(sol.value, 1.5, 1e-9);
  EXPECT_NEAR(sol.row[0], 0.5, 1e-9);
  EXPECT_NEAR(sol.col[0], 0.25, 1e-9);
}

TEST(MatrixGame, SaddlePointAndSingleRow) {
  auto sol = solve_matrix_game({{4, 5}, {2, 1}});
  EXPECT_NEAR(sol.value, 4.0, 1e-9);
  EXPECT_NEAR(sol.row[0], 1.0, 1e-9);
  auto one = solve_matrix_game({{2, 7, -1}});
  EXPECT_NEAR(one.value, -1.0, 1e-9);
}

TEST(MatrixGame, InfiniteEntries) {
  // The column player avoids the +inf column.
  auto a = solve_matrix_game({{kInf, 1}, {kInf, 3}});
  EXPECT_NEAR(a.value, 3.0, 1e-9);
  // The row player avoids the -inf row.
  auto b = solve_matrix_game({{-kInf, 5}, {2, 2}});
  EXPECT_NEAR(b.value, 2.0, 1e-9);
  auto c = solve_matrix_game({{kInf}});
  EXPECT_EQ(c.value, kInf);
}

TEST(MatrixGame, RandomGamesSatisfyMinimax) {
  testing::Gen gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int r = gen.uniform_int(1, 5), c = gen.uniform_int(1, 5);
    Matrix z(r, std::vector<double>(c));
    for (auto& row : z) {
      for (auto& x : row) x = gen.uniform(-5, 5);
    }
    auto sol = solve_matrix_game(z);
    EXPECT_TRUE(is_distribution(sol.row, 1e-8));
    EXPECT_TRUE(is_distribution(sol.col, 1e-8));
    EXPECT_NEAR(security_level(z, sol.row), sol.value, 1e-7);
    EXPECT_NEAR(column_guarantee(z, sol.col), sol.value, 1e-7);
    // The value lies between the pure maximin and minimax.
    double maximin = -kInf, minimax = kInf;
    for (int i = 0; i < r; ++i) maximin = std::max(maximin, *std::min_element(z[i].begin(), z[i].end()));
    for (int j = 0; j < c; ++j) {
      double m = -kInf;
      for (int i = 0; i < r; ++i) m = std::max(m, z[i][j]);
      minimax = std::min(minimax, m);
    }
    EXPECT_GE(sol.value, maximin - 1e-9);
    EXPECT_LE(sol.value, minimax + 1e-9);
  }
}

TEST(LinearSolve, GaussianElimination) {
  auto x = solve_dense({{2, 1}, {1, 3}}, {3, 5});
  EXPECT_NEAR(x[0], 0.8, 1e-12);
  EXPECT_NEAR(x[1], 1.4, 1e-12);
  EXPECT_THROW(solve_dense({{1, 2}, {2, 4}}, {1, 2}), SolverError);
}

}  // namespace
}  // namespace csg
