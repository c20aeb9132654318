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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "csgcheck/csg.hpp"
#include "csgcheck/model.hpp"
#include "csgcheck/nfg.hpp"
#include "csgcheck/text_util.hpp"

namespace csg::testing {

inline std::string model_path(const std::string& name) { return std::string(CSG_MODELS_DIR) + "/" + name; }

inline ElaboratedModel load_fixture(const std::string& name, const ConstantBindings& bindings = {}) {
  return elaborate(parse_model(read_file(model_path(name))), bindings);
}

// Small deterministic generator helpers on top of mt19937_64.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p) { return uniform(0.0, 1.0) < p; }
  // A distribution over k outcomes with a few zero entries.
  std::vector<double> distribution(int k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& x : w) {
      x = coin(0.3) ? 0.0 : uniform(0.05, 1.0);
      total += x;
    }
    if (total == 0.0) {
      w[uniform_int(0, k - 1)] = 1.0;
      return w;
    }
    for (auto& x : w) x /= total;
    double fix = 1.0;
    for (int i = 0; i + 1 < k; ++i) fix -= w[i];
    w[k - 1] = std::max(0.0, fix);
    return w;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline NormalFormGame random_nfg(Gen& gen, int players, int max_actions, double lo = -10.0, double hi = 10.0) {
  std::vector<std::vector<std::string>> names(players);
  for (int p = 0; p < players; ++p) {
    int k = gen.uniform_int(2, max_actions);
    for (int a = 0; a < k; ++a) names[p].push_back("a" + std::to_string(a));
  }
  NormalFormGame game(names);
  for (std::size_t k = 0; k < game.num_profiles(); ++k) {
    for (int p = 0; p < players; ++p) game.set_utility(k, p, std::round(gen.uniform(lo, hi) * 4.0) / 4.0);
  }
  return game;
}

struct RandomGameOptions {
  int states = 10;
  int players = 2;
  int max_actions = 3;
  int max_successors = 3;
  // Players in this list get only the idle action everywhere.
  std::vector<int> stripped;
};

// A random valid CSG with labels "goal" and "safe" and one nonnegative
// reward structure "cost".
inline Csg random_csg(Gen& gen, const RandomGameOptions& opt) {
  Csg g;
  const int n = opt.players, ns = opt.states;
  for (int p = 0; p < n; ++p) {
    g.player_names.push_back("p" + std::to_string(p + 1));
    std::vector<std::string> names{""};
    for (int a = 1; a <= opt.max_actions; ++a) names.push_back("a" + std::to_string(p + 1) + "_" + std::to_string(a));
    g.action_names.push_back(names);
  }
  g.label_names = {"goal", "safe"};
  g.rewards.push_back({"cost", std::vector<double>(ns), std::vector<std::vector<double>>(ns)});
  for (int s = 0; s < ns; ++s) {
    g.state_names.push_back("s" + std::to_string(s));
    std::vector<int> labels;
    if (s > 0 && gen.coin(0.15)) labels.push_back(0);
    if (gen.coin(0.85)) labels.push_back(1);
    g.state_labels.push_back(labels);
    std::vector<std::vector<int>> avail(n);
    for (int p = 0; p < n; ++p) {
      bool stripped = std::find(opt.stripped.begin(), opt.stripped.end(), p) != opt.stripped.end();
      int k = stripped ? 0 : gen.uniform_int(1, opt.max_actions);
      if (k == 0) {
        avail[p] = {kIdle};
      } else {
        for (int a = 1; a <= k; ++a) avail[p].push_back(a);
      }
    }
    g.available.push_back(avail);
    std::vector<Choice> choices;
    std::vector<int> pos(n, 0);
    while (true) {
      Choice c;
      for (int p = 0; p < n; ++p) c.joint.push_back(avail[p][pos[p]]);
      int m = gen.uniform_int(1, opt.max_successors);
      auto w = gen.distribution(m);
      for (int i = 0; i < m; ++i) {
        if (w[i] <= 0.0) continue;
        int t = gen.uniform_int(0, ns - 1);
        auto it = std::find_if(c.successors.begin(), c.successors.end(), [&](const Successor& x) { return x.state == t; });
        if (it == c.successors.end()) {
          c.successors.push_back({t, w[i]});
        } else {
          it->prob += w[i];
        }
      }
      choices.push_back(std::move(c));
      g.rewards[0].action_rewards[s].push_back(std::round(gen.uniform(0.0, 3.0)));
      int p = n - 1;
      while (p >= 0 && ++pos[p] == static_cast<int>(avail[p].size())) pos[p--] = 0;
      if (p < 0) break;
    }
    g.choices.push_back(std::move(choices));
    g.rewards[0].state_rewards[s] = std::round(gen.uniform(0.0, 2.0));
  }
  g.initial = 0;
  require_valid(g);
  return g;
}

// "safe" U "goal" on a game where only one player has choices, by plain
// value iteration from zero over the raw choice lists.
inline std::vector<double> reach_oracle(const Csg& g, bool maximize) {
  const int goal = g.find_label("goal"), safe = g.find_label("safe");
  std::vector<double> v(g.num_states(), 0.0), next(v.size());
  for (int iter = 0; iter < 1000000; ++iter) {
    double change = 0.0;
    for (int s = 0; s < g.num_states(); ++s) {
      if (g.has_label(s, goal)) {
        next[s] = 1.0;
      } else if (!g.has_label(s, safe)) {
        next[s] = 0.0;
      } else {
        double best = maximize ? -1.0 : 2.0;
        for (const auto& c : g.choices[s]) {
          double x = 0.0;
          for (const auto& t : c.successors) x += t.prob * v[t.state];
          best = maximize ? std::max(best, x) : std::min(best, x);
        }
        next[s] = best;
      }
      change = std::max(change, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (change < 1e-14) break;
  }
  return v;
}

}  // namespace csg::testing
