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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csgcheck/csg.hpp"
#include "csgcheck/equilibria.hpp"
#include "csgcheck/objective.hpp"
#include "csgcheck/property.hpp"
#include "csgcheck/strategy.hpp"

namespace csg {

struct CheckOptions {
  double epsilon = 1e-6;
  long max_iters = 1000000;
  int threads = 1;
  bool synthesize = true;
  // Called with the value vector after every value-iteration sweep of a
  // zero-sum solve.
  std::function<void(const std::vector<double>&)> on_sweep;
};

// Per-state values of a game operator and the strategies achieving them.
struct GameValues {
  std::vector<std::vector<double>> values;  // [coalition][state]
  std::optional<SynthesizedStrategy> strategy;
  long iterations = 0;
  double residual = 0.0;
};

struct CheckResult {
  std::string query;
  bool numeric = false;
  bool satisfied = false;           // bounded and boolean properties
  double value = 0.0;               // value at the initial state (sum for equilibria)
  std::vector<double> values;       // per coalition at the initial state
  std::vector<std::vector<double>> state_values;  // [coalition][state]
  std::vector<char> satisfying;     // boolean properties: [state]
  std::optional<SynthesizedStrategy> strategy;
  long iterations = 0;
  double residual = 0.0;
};

// States of a coalition game from which coalition 0 cannot make the target
// reachable with positive probability against every opponent (via left
// states). Qualitative: probabilities are ignored.
std::vector<char> prob0_max(const Csg& game, const std::vector<char>& left, const std::vector<char>& target);

// States where the given side (coalition 0 if `reacher_is_row`) reaches the
// target almost surely via left states.
std::vector<char> almost_sure_set(const Csg& game, const std::vector<char>& left, const std::vector<char>& target,
                                  bool reacher_is_row);

// Zero-sum value of `spec` for coalition 0 of a coalition game with one or
// two players; coalition 0 maximizes if `direction` is kMax.
GameValues solve_zero_sum(const CoalitionGame& game, const ObjectiveSpec& spec, Direction direction,
                          const CheckOptions& options);

// Optimal equilibria for one objective per coalition (a remainder coalition
// beyond specs.size() gets utility 0). Finite-horizon objectives use
// backward induction; unbounded ones need exactly two coalitions.
GameValues solve_equilibria(const CoalitionGame& game, const std::vector<ObjectiveSpec>& specs,
                            EquilibriumKind kind, Criterion criterion, Direction direction,
                            const CheckOptions& options);

class Checker {
 public:
  explicit Checker(const Csg& game, CheckOptions options = {});

  // `property` must be resolved against the model scope. Throws InputError
  // on type errors.
  CheckResult check(const Property& property);

  std::vector<char> satisfying_states(const Expr& formula);
  // Per-state values of a game operator.
  GameValues game_values(const GameFormula& formula);
  ObjectiveSpec objective_spec(const Objective& objective);

  const Csg& game() const { return game_; }
  const CheckOptions& options() const { return options_; }

 private:
  const Csg& game_;
  CheckOptions options_;
};

}  // namespace csg
