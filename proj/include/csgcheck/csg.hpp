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

#include <cstdint>
#include <string>
#include <vector>

#include "csgcheck/nfg.hpp"

namespace csg {

// Every player's action id 0 is the idle action.
inline constexpr int kIdle = 0;
inline constexpr double kModelTolerance = 1e-12;

struct Successor {
  int state = 0;
  double prob = 0.0;
  bool operator==(const Successor&) const = default;
};

// One defined joint action of a state, with its successor distribution.
struct Choice {
  std::vector<int> joint;
  std::vector<Successor> successors;
  bool operator==(const Choice&) const = default;
};

struct RewardStructure {
  std::string name;
  std::vector<double> state_rewards;                // [state]
  std::vector<std::vector<double>> action_rewards;  // [state][choice]
  bool operator==(const RewardStructure&) const = default;
};

// Explicit concurrent stochastic game. Choices of a state are listed in
// mixed-radix order over available[s], player 0 most significant, so the
// choice index equals the joint-action index of the state's local NFG.
struct Csg {
  std::vector<std::string> player_names;
  std::vector<std::vector<std::string>> action_names;  // [player][action], [p][0] is idle
  std::vector<std::string> state_names;
  int initial = 0;
  std::vector<std::string> label_names;
  std::vector<std::vector<int>> state_labels;          // [state] sorted label ids
  std::vector<std::vector<std::vector<int>>> available;  // [state][player] sorted ids
  std::vector<std::vector<Choice>> choices;             // [state]
  std::vector<RewardStructure> rewards;
  std::vector<std::string> variable_names;
  std::vector<std::vector<std::int64_t>> valuations;    // [state][variable], optional

  int num_players() const { return static_cast<int>(player_names.size()); }
  int num_states() const { return static_cast<int>(state_names.size()); }
  int num_choices(int s) const { return static_cast<int>(choices[s].size()); }

  int find_player(const std::string& name) const;
  int find_label(const std::string& name) const;
  int find_reward(const std::string& name) const;
  int find_state(const std::string& name) const;
  int find_action(int player, const std::string& name) const;

  bool has_label(int state, int label) const;
  // Indicator vector of the states carrying `label`.
  std::vector<char> label_states(int label) const;
  // Index into choices[s] of a joint action, or -1 if undefined there.
  int choice_index(int state, const std::vector<int>& joint) const;

  bool operator==(const Csg&) const = default;
};

struct Diagnostic {
  std::string rule;
  int state = -1;
  std::string detail;
};

std::vector<Diagnostic> validate_csg(const Csg& game);
// Throws InputError listing the first few diagnostics, if any.
void require_valid(const Csg& game);

// A_player(state); never empty ({idle} when nothing else is enabled).
const std::vector<int>& available_actions(const Csg& game, int state, int player);

// Player ids per coalition; disjoint, nonempty.
using Partition = std::vector<std::vector<int>>;

struct CoalitionGame {
  Csg game;
  Partition coalitions;  // including the appended remainder coalition
  // members[c][a]: original actions (aligned with coalitions[c]) behind
  // coalition action a.
  std::vector<std::vector<std::vector<int>>> members;
  // origin[s][k]: choice of the original game behind choice k.
  std::vector<std::vector<int>> origin;
};

// Throws InputError on unknown players, empty or overlapping coalitions.
// Players not covered form one extra, final coalition. Singleton
// coalitions keep the member's action names and ids.
CoalitionGame build_coalition_game(const Csg& game, const Partition& partition);

// Local one-shot game at `state`: u_i(alpha) = immediate[i][alpha] +
// sum_s' delta(state, alpha)(s') * continuation[s'][i]. Joint action indices
// of the result coincide with choice indices. Throws std::logic_error if
// continuation is missing for some state or player.
NormalFormGame local_nfg(const Csg& game, int state,
                         const std::vector<std::vector<double>>& continuation,
                         const std::vector<std::vector<double>>* immediate = nullptr);

}  // namespace csg
