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

#include <vector>

#include "csgcheck/nfg.hpp"

namespace csg {

// z[i][j] is the row player's payoff for row i against column j.
using Matrix = std::vector<std::vector<double>>;

struct GameSolution {
  double value = 0.0;
  MixedStrategy row;
  MixedStrategy col;
};

// Minimax solution of a zero-sum matrix game. The row strategy comes from
// the primal LP, the column strategy from its dual. Entries may be +inf
// (the column player then avoids those columns) or -inf (rows avoided by the
// row player); if every column is unsafe the value is +inf.
GameSolution solve_matrix_game(const Matrix& z, bool need_column = true);

// Payoff guaranteed by `row` against every column.
double security_level(const Matrix& z, const MixedStrategy& row);
// Worst payoff the column strategy concedes against every row.
double column_guarantee(const Matrix& z, const MixedStrategy& col);

}  // namespace csg
