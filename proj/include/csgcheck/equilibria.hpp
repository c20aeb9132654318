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

enum class EquilibriumKind { kNash, kCorrelated };
enum class Criterion { kSocialWelfare, kSocialFairness };
enum class Direction { kMax, kMin };

struct EquilibriumResult {
  EquilibriumKind kind = EquilibriumKind::kNash;
  std::vector<double> values;
  StrategyProfile profile;  // Nash witnesses only
  JointDistribution joint;  // correlated witness, or the product of `profile`
  double epsilon = 0.0;     // largest deviation gain of the witness
  int skipped_supports = 0;  // n>2 supports where the Newton solve stalled
};

struct BestResponse {
  double value = 0.0;
  int action = 0;
};

// Best pure reply of `player` when everyone else follows `profile`; the
// player's own entry of `profile` is ignored. Ties go to the lowest action.
BestResponse best_response_value(const NormalFormGame& game, int player,
                                 const StrategyProfile& profile);

// Largest unilateral gain over all players (>= 0 up to round-off).
double nash_gain(const NormalFormGame& game, const StrategyProfile& profile);
// Largest violation of the correlated-equilibrium regret inequalities.
double correlated_gain(const NormalFormGame& game, const JointDistribution& joint);

bool check_epsilon_ne(const NormalFormGame& game, const StrategyProfile& profile, double eps);
bool check_ce(const NormalFormGame& game, const JointDistribution& joint, double eps);

// Support enumeration. Two players: exact LPs per support pair. More
// players (at most 64 joint actions): damped Newton on the indifference
// system per support. Throws SolverError if nothing is found.
EquilibriumResult find_ne(const NormalFormGame& game, Criterion criterion);
EquilibriumResult find_ce(const NormalFormGame& game, Criterion criterion);

NormalFormGame negate_for_social_cost(const NormalFormGame& game);

// Dispatches on kind; Direction::kMin solves the negated game and negates
// the reported values back.
EquilibriumResult find_equilibrium(const NormalFormGame& game, EquilibriumKind kind,
                                   Criterion criterion, Direction direction);

double welfare(const std::vector<double>& values);
double spread(const std::vector<double>& values);

}  // namespace csg
