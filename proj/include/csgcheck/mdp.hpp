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

#include "csgcheck/csg.hpp"
#include "csgcheck/equilibria.hpp"
#include "csgcheck/objective.hpp"

namespace csg {

struct MdpAction {
  std::vector<Successor> successors;  // node ids
  double reward = 0.0;
};

// Explicit MDP over "nodes" that map back to game states. Transient nodes
// model a chance move inside a step: entering one consumes no step, and
// they are never targets.
struct Mdp {
  std::vector<int> base;  // game state of each node
  std::vector<char> transient;
  std::vector<std::vector<MdpAction>> actions;

  int size() const { return static_cast<int>(base.size()); }
  int add_node(int state, bool is_transient = false);
};

// One node per state and one action per choice: all players acting as one.
Mdp mdp_from_game(const Csg& game, const ObjectiveSpec& spec);

struct MdpSolution {
  std::vector<double> values;
  std::vector<int> policy;  // chosen action per node
  long iterations = 0;
  double residual = 0.0;
};

// Unbounded objectives (until, reachability reward) by value iteration
// after qualitative precomputation; +inf marks states where the reward
// objective does not reach its target almost surely.
MdpSolution solve_mdp(const Mdp& mdp, const ObjectiveSpec& spec, Direction direction, double tolerance,
                      long max_iters);

// Finite-horizon objectives: table[j][node] is the optimal value with j
// steps remaining, for j = 0..steps.
std::vector<std::vector<double>> solve_mdp_bounded(const Mdp& mdp, const ObjectiveSpec& spec, const Csg& game,
                                                   Direction direction, int steps);

// Exact values of an unbounded objective on a Markov chain (one action per
// node) by Gaussian elimination.
std::vector<double> solve_chain(const Mdp& chain, const ObjectiveSpec& spec);

// Qualitative sets over the nodes of an MDP.
std::vector<char> exists_positive(const Mdp& mdp, const ObjectiveSpec& spec);
std::vector<char> forall_positive(const Mdp& mdp, const ObjectiveSpec& spec);
std::vector<char> exists_almost_sure(const Mdp& mdp, const ObjectiveSpec& spec);
std::vector<char> forall_almost_sure(const Mdp& mdp, const ObjectiveSpec& spec);

}  // namespace csg
