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

#include "csgcheck/objective.hpp"

#include "csgcheck/error.hpp"

namespace csg {

bool ObjectiveSpec::is_reward() const {
  return type == ObjectiveType::kInstant || type == ObjectiveType::kCumulative || type == ObjectiveType::kReach;
}

bool ObjectiveSpec::finite_horizon() const { return type != ObjectiveType::kUntil && type != ObjectiveType::kReach; }

int ObjectiveSpec::horizon() const { return type == ObjectiveType::kNext ? 1 : finite_horizon() ? bound : 0; }

namespace {

int bound_of(const ExprPtr& e) {
  Value v = evaluate_constant(e);
  if (v.type != Type::kInt) throw InputError("step bound must be an integer");
  if (v.i < 0) throw InputError("step bound must be nonnegative");
  if (v.i > 1000000) throw InputError("step bound too large");
  return static_cast<int>(v.i);
}

}  // namespace

ObjectiveSpec make_objective_spec(const Objective& objective, const Csg& game, std::vector<char> left,
                                  std::vector<char> right) {
  ObjectiveSpec spec;
  const int ns = game.num_states();
  spec.left = left.empty() ? std::vector<char>(ns, 1) : std::move(left);
  spec.right = right.empty() ? std::vector<char>(ns, 0) : std::move(right);
  if (!objective.is_reward) {
    switch (objective.path.op) {
      case PathOp::kNext:
        spec.type = ObjectiveType::kNext;
        spec.bound = 1;
        break;
      case PathOp::kUntil:
        spec.type = ObjectiveType::kUntil;
        break;
      case PathOp::kBoundedUntil:
        spec.type = ObjectiveType::kBoundedUntil;
        spec.bound = bound_of(objective.path.bound);
        break;
    }
    return spec;
  }
  if (game.rewards.empty()) throw InputError("model has no reward structures");
  spec.reward = objective.reward.empty() ? 0 : game.find_reward(objective.reward);
  if (spec.reward < 0) throw InputError("unknown reward structure \"" + objective.reward + "\"");
  switch (objective.rew.op) {
    case RewardOp::kInstant:
      spec.type = ObjectiveType::kInstant;
      spec.bound = bound_of(objective.rew.bound);
      break;
    case RewardOp::kCumulative:
      spec.type = ObjectiveType::kCumulative;
      spec.bound = bound_of(objective.rew.bound);
      break;
    case RewardOp::kReach:
      spec.type = ObjectiveType::kReach;
      break;
  }
  return spec;
}

double terminal_value(const ObjectiveSpec& spec, const Csg& game, int state) {
  switch (spec.type) {
    case ObjectiveType::kNext:
    case ObjectiveType::kBoundedUntil:
      return spec.right[state] ? 1.0 : 0.0;
    case ObjectiveType::kInstant:
      return game.rewards[spec.reward].state_rewards[state];
    default:
      return 0.0;
  }
}

bool decided_at(const ObjectiveSpec& spec, int state, double* value) {
  switch (spec.type) {
    case ObjectiveType::kBoundedUntil:
    case ObjectiveType::kUntil:
      if (spec.right[state]) {
        *value = 1.0;
        return true;
      }
      if (!spec.left[state]) {
        *value = 0.0;
        return true;
      }
      return false;
    case ObjectiveType::kReach:
      if (spec.right[state]) {
        *value = 0.0;
        return true;
      }
      return false;
    default:
      return false;
  }
}

double step_reward(const ObjectiveSpec& spec, const Csg& game, int state, int choice) {
  if (spec.type != ObjectiveType::kCumulative && spec.type != ObjectiveType::kReach) return 0.0;
  const auto& r = game.rewards[spec.reward];
  return r.state_rewards[state] + r.action_rewards[state][choice];
}

std::string objective_name(ObjectiveType type) {
  switch (type) {
    case ObjectiveType::kNext: return "next";
    case ObjectiveType::kBoundedUntil: return "bounded until";
    case ObjectiveType::kUntil: return "until";
    case ObjectiveType::kInstant: return "instantaneous reward";
    case ObjectiveType::kCumulative: return "cumulative reward";
    case ObjectiveType::kReach: return "reachability reward";
  }
  return "";
}

}  // namespace csg
