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

#include "csgcheck/csg.hpp"
#include "csgcheck/json_writer.hpp"

namespace csg {

// Interchange format for explicit games:
//   players      [{name, actions: [name...]}]   (idle is implicit, written null)
//   labels       [name...]                       (optional; declaration order)
//   variables    [name...]                       (optional)
//   states       [{name, labels: [name...], values: [int...]}]
//   initial      state index
//   transitions  [{state, joint_action: [name|null...], successors: [{state, prob}]}]
//   rewards      [{name, state_rewards: [...], action_rewards: [{state, joint_action, value}]}]
// The action assignment is derived from the transitions; the joint actions
// of a state must cover the product of the per-player sets.
ordered_json game_to_json(const Csg& game);
Csg game_from_json(const nlohmann::json& doc);

std::string export_game(const Csg& game);
Csg import_game(std::string_view text);

}  // namespace csg
