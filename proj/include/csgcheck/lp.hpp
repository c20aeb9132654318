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

#pragma once

#include <limits>
#include <vector>

namespace csg {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kMaximize, kMinimize };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// Variables default to [0, +inf). Set lower[j] = -inf for a free variable.
struct LinearProgram {
  Sense sense = Sense::kMaximize;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LinearProgram(int num_variables = 0, Sense s = Sense::kMaximize)
      : sense(s),
        objective(num_variables, 0.0),
        lower(num_variables, 0.0),
        upper(num_variables, std::numeric_limits<double>::infinity()) {}

  int num_variables() const { return static_cast<int>(objective.size()); }
  void add(std::vector<double> coeffs, Relation relation, double rhs) {
    constraints.push_back({std::move(coeffs), relation, rhs});
  }
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
};

inline constexpr double kPivotTolerance = 1e-10;

// Dense two-phase primal simplex with Bland's rule. Throws InputError on
// dimension mismatches or non-finite coefficients, SolverError if the pivot
// budget is exhausted.
LpResult lp_solve(const LinearProgram& lp);

}  // namespace csg
