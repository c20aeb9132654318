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

#include "csgcheck/strategy_eval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "csgcheck/error.hpp"

namespace csg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const StrategyEntry& entry_at(const SynthesizedStrategy& st, const Csg& g, int s, int m) {
  const StrategyEntry* e = st.find(s, m);
  if (!e) {
    throw InputError("strategy has no entry for state " + g.state_names[s] + " with memory " + std::to_string(m));
  }
  return *e;
}

void check_shape(const Csg& g, const SynthesizedStrategy& st, const StrategyEntry& e) {
  const int s = e.state;
  if (st.joint) {
    if (static_cast<int>(e.joint.size()) != g.num_choices(s)) {
      throw InputError("joint entry for " + g.state_names[s] + " does not match the game");
    }
    return;
  }
  if (static_cast<int>(e.local.size()) != g.num_players()) {
    throw InputError("entry for " + g.state_names[s] + " needs one distribution per coalition");
  }
  for (int c = 0; c < g.num_players(); ++c) {
    if (e.local[c].size() != g.available[s][c].size()) {
      throw InputError("entry for " + g.state_names[s] + " does not match the available actions");
    }
  }
}

// Remaining bound of a finite-horizon objective at a chain node.
int remaining(const ObjectiveSpec& spec, const SynthesizedStrategy& st, int memory) {
  if (st.memory_kind != MemoryKind::kSteps) return spec.horizon();
  return spec.horizon() - (st.memory_size - 1) + memory;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class T>
int sample(std::mt19937_64& rng, const std::vector<T>& items, double T::*prob) {
  double u = uniform01(rng);
  for (std::size_t i = 0; i < items.size(); ++i) {
    u -= items[i].*prob;
    if (u < 0) return static_cast<int>(i);
  }
  return static_cast<int>(items.size()) - 1;
}

}  // namespace

InducedChain induce_chain(const Csg& g, const SynthesizedStrategy& st) {
  InducedChain chain;
  chain.memory_size = st.memory_size;
  chain.lookup.assign(static_cast<std::size_t>(g.num_states()) * st.memory_size, -1);
  std::deque<int> queue;
  auto intern = [&](int s, int m) {
    int& slot = chain.lookup[static_cast<std::size_t>(s) * st.memory_size + m];
    if (slot < 0) {
      slot = chain.size();
      chain.state.push_back(s);
      chain.memory.push_back(m);
      chain.mix.emplace_back();
      chain.next.emplace_back();
      queue.push_back(slot);
    }
    return slot;
  };
  chain.initial = intern(g.initial, st.initial_memory);
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    const int s = chain.state[x];
    const int m = chain.memory[x];
    const StrategyEntry& e = entry_at(st, g, s, m);
    check_shape(g, st, e);
    auto dist = choice_distribution(g, e, st.joint);
    std::vector<Successor> next;
    for (int k = 0; k < g.num_choices(s); ++k) {
      if (dist[k] <= 0.0) continue;
      chain.mix[x].push_back({k, dist[k]});
      for (const auto& t : g.choices[s][k].successors) {
        int y = intern(t.state, st.next_memory(m, t.state));
        auto it = std::find_if(next.begin(), next.end(), [&](const Successor& z) { return z.state == y; });
        if (it == next.end()) {
          next.push_back({y, dist[k] * t.prob});
        } else {
          it->prob += dist[k] * t.prob;
        }
      }
    }
    chain.next[x] = std::move(next);
  }
  return chain;
}

Mdp chain_mdp(const InducedChain& chain, const Csg& g, const ObjectiveSpec& spec) {
  Mdp mdp;
  for (int x = 0; x < chain.size(); ++x) {
    mdp.add_node(chain.state[x]);
    double reward = 0.0;
    for (const auto& [k, p] : chain.mix[x]) reward += p * step_reward(spec, g, chain.state[x], k);
    mdp.actions[x].push_back({chain.next[x], reward});
  }
  return mdp;
}

std::vector<double> chain_values(const InducedChain& chain, const Csg& g, const ObjectiveSpec& spec,
                                 const SynthesizedStrategy& st) {
  Mdp mdp = chain_mdp(chain, g, spec);
  if (!spec.finite_horizon()) return solve_chain(mdp, spec);
  auto table = solve_mdp_bounded(mdp, spec, g, Direction::kMax, spec.horizon());
  std::vector<double> values(chain.size(), kNaN);
  for (int x = 0; x < chain.size(); ++x) {
    int r = remaining(spec, st, chain.memory[x]);
    if (r >= 0) values[x] = table[r][x];
  }
  return values;
}

double evaluate_exact(const InducedChain& chain, const Csg& g, const ObjectiveSpec& spec,
                      const SynthesizedStrategy& st) {
  return chain_values(chain, g, spec, st)[chain.initial];
}

std::uint64_t run_seed(std::uint64_t seed, long run) {
  std::uint64_t z = seed + static_cast<std::uint64_t>(run + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SimulationResult simulate(const InducedChain& chain, const Csg& g, const ObjectiveSpec& spec, long runs,
                          std::uint64_t seed, long max_steps, int threads) {
  if (runs < 1) throw InputError("simulation needs at least one run");
  SimulationResult out;
  out.runs = runs;
  out.seed = seed;
  out.outcomes.assign(runs, 0.0);
  std::vector<char> cut(runs, 0);
  struct Mix {
    int choice;
    double prob;
  };
  std::vector<std::vector<Mix>> mix(chain.size());
  for (int x = 0; x < chain.size(); ++x) {
    for (const auto& [k, p] : chain.mix[x]) mix[x].push_back({k, p});
  }
  // Nodes that cannot reach the target end a run at once.
  std::vector<char> hopeless(chain.size(), 0);
  if (spec.type == ObjectiveType::kUntil) {
    std::vector<std::vector<int>> pred(chain.size());
    for (int x = 0; x < chain.size(); ++x) {
      for (const auto& y : chain.next[x]) pred[y.state].push_back(x);
    }
    std::vector<char> reach(chain.size(), 0);
    std::deque<int> queue;
    for (int x = 0; x < chain.size(); ++x) {
      if (spec.right[chain.state[x]]) {
        reach[x] = 1;
        queue.push_back(x);
      }
    }
    while (!queue.empty()) {
      int y = queue.front();
      queue.pop_front();
      for (int x : pred[y]) {
        if (reach[x] || !spec.left[chain.state[x]]) continue;
        reach[x] = 1;
        queue.push_back(x);
      }
    }
    for (int x = 0; x < chain.size(); ++x) hopeless[x] = !reach[x];
  }
  auto one_run = [&](long run) {
    std::mt19937_64 rng(run_seed(seed, run));
    int x = chain.initial;
    double total = 0.0;
    for (long step = 0;; ++step) {
      const int s = chain.state[x];
      switch (spec.type) {
        case ObjectiveType::kUntil:
          if (spec.right[s]) return 1.0;
          if (!spec.left[s] || hopeless[x]) return 0.0;
          break;
        case ObjectiveType::kBoundedUntil:
          if (spec.right[s]) return 1.0;
          if (!spec.left[s] || step == spec.bound) return 0.0;
          break;
        case ObjectiveType::kNext:
          if (step == 1) return spec.right[s] ? 1.0 : 0.0;
          break;
        case ObjectiveType::kInstant:
          if (step == spec.bound) return g.rewards[spec.reward].state_rewards[s];
          break;
        case ObjectiveType::kCumulative:
          if (step == spec.bound) return total;
          break;
        case ObjectiveType::kReach:
          if (spec.right[s]) return total;
          break;
      }
      if (step >= max_steps) {
        cut[run] = 1;
        return spec.is_reward() ? total : 0.0;
      }
      const int k = mix[x][sample(rng, mix[x], &Mix::prob)].choice;
      total += step_reward(spec, g, s, k);
      const auto& succ = g.choices[s][k].successors;
      const int t = succ[sample(rng, succ, &Successor::prob)].state;
      x = chain.node(t, [&] {
        // Memory update mirrors induce_chain.
        for (const auto& y : chain.next[x]) {
          if (chain.state[y.state] == t) return chain.memory[y.state];
        }
        return 0;
      }());
    }
  };
  threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, runs)));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (long r = w; r < runs; r += threads) out.outcomes[r] = one_run(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  double sum = 0.0;
  for (double v : out.outcomes) sum += v;
  out.mean = sum / runs;
  if (runs > 1) {
    double sq = 0.0;
    for (double v : out.outcomes) sq += (v - out.mean) * (v - out.mean);
    out.half_width = 1.96 * std::sqrt(sq / (runs - 1)) / std::sqrt(static_cast<double>(runs));
  }
  for (char c : cut) out.truncated += c;
  return out;
}

namespace {

struct Deviation {
  Mdp mdp;
  Mdp chain;                  // the strategy's own play
  std::vector<int> memory;    // per node
};

Deviation deviation_mdp(const Csg& g, const SynthesizedStrategy& st, int coalition, const ObjectiveSpec& spec) {
  Deviation d;
  std::vector<int> follow;
  std::vector<int> lookup(static_cast<std::size_t>(g.num_states()) * st.memory_size, -1);
  std::deque<int> queue;
  auto intern = [&](int s, int m) {
    int& slot = lookup[static_cast<std::size_t>(s) * st.memory_size + m];
    if (slot < 0) {
      slot = d.mdp.add_node(s);
      d.memory.push_back(m);
      follow.push_back(0);
      queue.push_back(slot);
    }
    return slot;
  };
  // Adds the weighted choices of `s` (memory m) as one action.
  auto action_of = [&](int s, int m, const std::vector<std::pair<int, double>>& weights) {
    MdpAction a;
    for (const auto& [k, w] : weights) {
      if (w <= 0.0) continue;
      a.reward += w * step_reward(spec, g, s, k);
      for (const auto& t : g.choices[s][k].successors) {
        a.successors.push_back({intern(t.state, st.next_memory(m, t.state)), w * t.prob});
      }
    }
    return a;
  };
  intern(g.initial, st.initial_memory);
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    const int s = d.mdp.base[x];
    const int m = d.memory[x];
    const StrategyEntry& e = entry_at(st, g, s, m);
    check_shape(g, st, e);
    const auto& avail = g.available[s][coalition];
    const int nb = static_cast<int>(avail.size());
    auto dist = choice_distribution(g, e, st.joint);
    auto own = [&](int k) {
      return static_cast<int>(std::lower_bound(avail.begin(), avail.end(), g.choices[s][k].joint[coalition]) -
                              avail.begin());
    };
    if (!st.joint) {
      std::vector<std::vector<std::pair<int, double>>> by_action(nb);
      std::vector<std::pair<int, double>> all;
      for (int k = 0; k < g.num_choices(s); ++k) {
        double w = 1.0;
        for (int c = 0; c < g.num_players(); ++c) {
          if (c == coalition) continue;
          const auto& av = g.available[s][c];
          w *= e.local[c][std::lower_bound(av.begin(), av.end(), g.choices[s][k].joint[c]) - av.begin()];
        }
        by_action[own(k)].push_back({k, w});
        all.push_back({k, dist[k]});
      }
      for (int b = 0; b < nb; ++b) {
        MdpAction a = action_of(s, m, by_action[b]);
        d.mdp.actions[x].push_back(std::move(a));
      }
      MdpAction follow_action = action_of(s, m, all);
      d.mdp.actions[x].push_back(std::move(follow_action));
      follow[x] = nb;
      continue;
    }
    // Correlated: a chance move draws the recommendation, then the
    // coalition picks its action knowing only its own part.
    std::vector<double> marginal(nb, 0.0);
    for (int k = 0; k < g.num_choices(s); ++k) marginal[own(k)] += dist[k];
    MdpAction chance;
    for (int a = 0; a < nb; ++a) {
      if (marginal[a] <= 0.0) continue;
      const int y = d.mdp.add_node(s, true);
      d.memory.push_back(m);
      follow.push_back(a);
      chance.successors.push_back({y, marginal[a]});
      for (int b = 0; b < nb; ++b) {
        std::vector<std::pair<int, double>> weights;
        for (int k = 0; k < g.num_choices(s); ++k) {
          if (own(k) != a || dist[k] <= 0.0) continue;
          auto alpha = g.choices[s][k].joint;
          alpha[coalition] = avail[b];
          weights.push_back({g.choice_index(s, alpha), dist[k] / marginal[a]});
        }
        MdpAction act = action_of(s, m, weights);
        d.mdp.actions[y].push_back(std::move(act));
      }
    }
    d.mdp.actions[x].push_back(std::move(chance));
    follow[x] = 0;
  }
  d.chain = d.mdp;
  for (int x = 0; x < d.mdp.size(); ++x) {
    d.chain.actions[x] = {d.mdp.actions[x][follow[x]]};
  }
  return d;
}

}  // namespace

DeviationReport best_response_check(const Csg& g, const SynthesizedStrategy& st,
                                    const std::vector<CoalitionObjective>& objectives, double eps, double tolerance,
                                    long max_iters) {
  DeviationReport report;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    const auto& obj = objectives[i];
    if (obj.coalition < 0 || obj.coalition >= g.num_players()) throw InputError("unknown coalition in check");
    Deviation d = deviation_mdp(g, st, obj.coalition, obj.spec);
    const int n = d.mdp.size();
    std::vector<double> best, own;
    std::vector<int> steps(n, 0);
    if (obj.spec.finite_horizon()) {
      const int h = obj.spec.horizon();
      auto dev = solve_mdp_bounded(d.mdp, obj.spec, g, obj.direction, h);
      auto fol = solve_mdp_bounded(d.chain, obj.spec, g, obj.direction, h);
      best.assign(n, kNaN);
      own.assign(n, kNaN);
      for (int x = 0; x < n; ++x) {
        int r = remaining(obj.spec, st, d.memory[x]);
        if (r < 0) continue;
        best[x] = dev[r][x];
        own[x] = fol[r][x];
      }
    } else {
      best = solve_mdp(d.mdp, obj.spec, obj.direction, tolerance, max_iters).values;
      own = solve_chain(d.chain, obj.spec);
    }
    double gain = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x) {
      if (d.mdp.transient[x] || std::isnan(best[x]) || std::isnan(own[x])) continue;
      if (st.memory_kind == MemoryKind::kFlags && (d.memory[x] >> obj.coalition & 1)) continue;
      double delta = best[x] == own[x] ? 0.0 : obj.direction == Direction::kMax ? best[x] - own[x] : own[x] - best[x];
      gain = std::max(gain, delta);
      if (delta > eps && delta > worst) {
        worst = delta;
        report.worst = static_cast<int>(i);
        report.worst_state = g.state_names[d.mdp.base[x]];
        report.worst_memory = d.memory[x];
      }
    }
    if (std::isinf(gain) && gain < 0) gain = 0.0;
    report.gains.push_back(gain);
    if (!(gain <= eps)) report.certified = false;
  }
  return report;
}

}  // namespace csg
