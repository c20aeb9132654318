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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csg {

// Probability per action of one player, indexed like the player's action list.
using MixedStrategy = std::vector<double>;
// One mixed strategy per player.
using StrategyProfile = std::vector<MixedStrategy>;
// Probability per joint action, indexed by NormalFormGame::index().
using JointDistribution = std::vector<double>;

inline constexpr double kStrategyTolerance = 1e-9;

// A finite n-player one-shot game. Joint actions are stored in mixed-radix
// order with player 0 as the most significant digit.
class NormalFormGame {
 public:
  NormalFormGame() = default;
  // All utilities start at zero.
  explicit NormalFormGame(std::vector<std::vector<std::string>> action_names);

  int num_players() const { return static_cast<int>(actions_.size()); }
  int num_actions(int player) const {
    return static_cast<int>(actions_[player].size());
  }
  const std::vector<std::string>& action_names(int player) const {
    return actions_[player];
  }
  std::size_t num_profiles() const { return num_profiles_; }

  std::size_t index(std::span<const int> joint) const;
  std::vector<int> decode(std::size_t index) const;
  // Action of `player` inside the joint action with the given index.
  int action_of(std::size_t index, int player) const {
    return static_cast<int>((index / strides_[player]) % actions_[player].size());
  }
  // Index of the joint action obtained by replacing `player`'s action.
  std::size_t with_action(std::size_t index, int player, int action) const {
    return index - static_cast<std::size_t>(action_of(index, player)) * strides_[player] +
           static_cast<std::size_t>(action) * strides_[player];
  }

  double utility(std::size_t index, int player) const {
    return utilities_[index * actions_.size() + player];
  }
  void set_utility(std::size_t index, int player, double value) {
    utilities_[index * actions_.size() + player] = value;
  }
  std::span<const double> utilities(std::size_t index) const {
    return {utilities_.data() + index * actions_.size(), actions_.size()};
  }

  bool operator==(const NormalFormGame&) const = default;

 private:
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
  std::vector<double> utilities_;
};

bool is_distribution(std::span<const double> probabilities,
                     double tolerance = kStrategyTolerance);

// Throws InputError unless `profile` has one valid distribution per player.
void validate_profile(const NormalFormGame& game, const StrategyProfile& profile);
void validate_joint(const NormalFormGame& game, const JointDistribution& joint);

std::vector<double> expected_utilities(const NormalFormGame& game,
                                       const StrategyProfile& profile);
std::vector<double> expected_utilities(const NormalFormGame& game,
                                       const JointDistribution& joint);
JointDistribution product_distribution(const NormalFormGame& game,
                                       const StrategyProfile& profile);

// Plain-text table, one line per joint action: `a1 ... an : u1 ... un`.
// Blank lines and lines starting with '#' are ignored. Actions are numbered
// per player in order of first appearance.
NormalFormGame parse_nfg_table(std::string_view text);
std::string format_nfg_table(const NormalFormGame& game);

}  // namespace csg
