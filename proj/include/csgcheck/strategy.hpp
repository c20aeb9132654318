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
#include <string_view>
#include <vector>

#include "csgcheck/csg.hpp"
#include "csgcheck/json_writer.hpp"

namespace csg {

// Memory of a synthesized strategy: none, remaining steps of a bounded
// horizon, or one "objective decided" bit per coalition.
enum class MemoryKind { kNone, kSteps, kFlags };

struct StrategyEntry {
  int state = 0;
  int memory = 0;
  // Profiles: one distribution per coalition over the coalition game's
  // available[state][c]. Joint strategies: one distribution over the
  // coalition game's choices[state].
  std::vector<MixedStrategy> local;
  std::vector<double> joint;
  bool operator==(const StrategyEntry&) const = default;
};

// Strategies of all coalitions of a coalition game, as produced by the
// checker. Entries are sorted by (state, memory).
struct SynthesizedStrategy {
  bool joint = false;
  std::vector<std::vector<std::string>> coalitions;  // player names, including the remainder
  MemoryKind memory_kind = MemoryKind::kNone;
  int memory_size = 1;
  int initial_memory = 0;
  std::vector<std::vector<char>> decided;  // flags memory: [coalition][state]
  std::vector<StrategyEntry> entries;

  int next_memory(int memory, int next_state) const;
  const StrategyEntry* find(int state, int memory) const;
  // Sorts entries and keeps only those reachable in the game graph from
  // (initial state, initial memory).
  void prune(const Csg& game);
  bool operator==(const SynthesizedStrategy&) const = default;
};

Partition strategy_partition(const SynthesizedStrategy& strategy, const Csg& game);

// Distribution over choices[state] of the coalition game.
std::vector<double> choice_distribution(const Csg& coalition_game, const StrategyEntry& entry, bool joint);

// Strategy file format:
//   kind         "profile" | "joint"
//   coalitions   [[player...]...]
//   memory_kind  "none" | "steps" | "flags"
//   memory_size, initial_memory
//   decided      [[state...]...]            (flags only)
//   entries      [{state, memory, rows}]
// Profile rows hold one list of {action, prob} per coalition; joint rows are
// {joint_action: [action...], prob}. Actions are coalition game action
// names, "" for idle.
ordered_json strategy_to_json(const SynthesizedStrategy& strategy, const Csg& game);
SynthesizedStrategy strategy_from_json(const nlohmann::json& doc, const Csg& game);

std::string export_strategy(const SynthesizedStrategy& strategy, const Csg& game);
// Throws InputError on schema violations or a mismatch with the model.
SynthesizedStrategy import_strategy(std::string_view text, const Csg& game);

}  // namespace csg
