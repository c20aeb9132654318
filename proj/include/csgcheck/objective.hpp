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

#include <string>
#include <vector>

#include "csgcheck/csg.hpp"
#include "csgcheck/property.hpp"

namespace csg {

enum class ObjectiveType { kNext, kBoundedUntil, kUntil, kInstant, kCumulative, kReach };

// A path or reward objective with its state formulas already evaluated.
struct ObjectiveSpec {
  ObjectiveType type = ObjectiveType::kUntil;
  int bound = 0;
  std::vector<char> left;   // [state]; all set when the operator has no left side
  std::vector<char> right;  // [state] target, or the X operand
  int reward = -1;          // reward structure for reward objectives

  bool is_reward() const;
  bool finite_horizon() const;
  // Number of steps a finite-horizon objective looks ahead.
  int horizon() const;
};

// Throws InputError for unknown reward structures or negative bounds.
ObjectiveSpec make_objective_spec(const Objective& objective, const Csg& game, std::vector<char> left,
                                  std::vector<char> right);

// Value of a finite-horizon objective with no steps left.
double terminal_value(const ObjectiveSpec& spec, const Csg& game, int state);

// Value fixed by the current state alone (target reached, or left side
// violated), if any.
bool decided_at(const ObjectiveSpec& spec, int state, double* value);

// Reward collected when `choice` is taken in `state`.
double step_reward(const ObjectiveSpec& spec, const Csg& game, int state, int choice);

std::string objective_name(ObjectiveType type);

}  // namespace csg
