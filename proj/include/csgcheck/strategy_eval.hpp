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

#include "csgcheck/csg.hpp"
#include "csgcheck/mdp.hpp"
#include "csgcheck/objective.hpp"
#include "csgcheck/strategy.hpp"

namespace csg {

// Markov chain of (state, memory) pairs reachable under a strategy of a
// coalition game.
struct InducedChain {
  std::vector<int> state;
  std::vector<int> memory;
  std::vector<std::vector<std::pair<int, double>>> mix;  // [node] (choice, prob), prob > 0
  std::vector<std::vector<Successor>> next;               // [node] successor nodes
  std::vector<int> lookup;                                // state * memory_size + memory -> node or -1
  int memory_size = 1;
  int initial = 0;

  int size() const { return static_cast<int>(state.size()); }
  int node(int s, int m) const { return lookup[static_cast<std::size_t>(s) * memory_size + m]; }
};

// Throws InputError if a reachable (state, memory) pair has no entry.
InducedChain induce_chain(const Csg& coalition_game, const SynthesizedStrategy& strategy);

// The chain as a one-action MDP carrying the objective's step rewards.
Mdp chain_mdp(const InducedChain& chain, const Csg& coalition_game, const ObjectiveSpec& spec);

// Exact value per node. With a step-counter memory the objective's
// remaining bound follows the memory; NaN marks nodes where it has expired.
// Unbounded objectives use Gaussian elimination (+inf for rewards whose
// target is missed with positive probability).
std::vector<double> chain_values(const InducedChain& chain, const Csg& coalition_game, const ObjectiveSpec& spec,
                                 const SynthesizedStrategy& strategy);
double evaluate_exact(const InducedChain& chain, const Csg& coalition_game, const ObjectiveSpec& spec,
                      const SynthesizedStrategy& strategy);

struct SimulationResult {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal interval
  long runs = 0;
  std::uint64_t seed = 0;
  long truncated = 0;  // runs cut off at max_steps
  std::vector<double> outcomes;
};

// Seed of run `run`: splitmix64 applied to seed + (run + 1) * golden gamma.
// Each run draws from its own mt19937_64.
std::uint64_t run_seed(std::uint64_t seed, long run);

SimulationResult simulate(const InducedChain& chain, const Csg& coalition_game, const ObjectiveSpec& spec, long runs,
                          std::uint64_t seed, long max_steps = 100000, int threads = 1);

struct CoalitionObjective {
  int coalition = 0;
  ObjectiveSpec spec;
  Direction direction = Direction::kMax;  // what the coalition wants
};

struct DeviationReport {
  bool certified = true;
  std::vector<double> gains;  // per checked objective
  int worst = -1;             // index into the objectives, -1 if none gains
  std::string worst_state;
  int worst_memory = 0;
};

// For each coalition: fixes the others' strategies, solves the resulting
// MDP (value iteration to `tolerance`) and compares with the strategy's own
// value at every (state, memory) reachable under deviations. Correlated
// strategies are checked against deviations that see their own
// recommendation.
DeviationReport best_response_check(const Csg& coalition_game, const SynthesizedStrategy& strategy,
                                    const std::vector<CoalitionObjective>& objectives, double eps,
                                    double tolerance = 1e-8, long max_iters = 1000000);

}  // namespace csg
