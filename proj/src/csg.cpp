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

#include "csgcheck/csg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "csgcheck/error.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {
namespace {

int find_name(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

// Calls f(joint) for every tuple of the product of `sets`, last set fastest.
template <typename F>
void for_each_tuple(const std::vector<std::vector<int>>& sets, F&& f) {
  for (const auto& s : sets) {
    if (s.empty()) return;
  }
  std::vector<int> pos(sets.size(), 0), joint(sets.size());
  while (true) {
    for (std::size_t i = 0; i < sets.size(); ++i) joint[i] = sets[i][pos[i]];
    f(joint);
    int p = static_cast<int>(sets.size()) - 1;
    while (p >= 0 && ++pos[p] == static_cast<int>(sets[p].size())) pos[p--] = 0;
    if (p < 0) return;
  }
}

}  // namespace

int Csg::find_player(const std::string& name) const { return find_name(player_names, name); }
int Csg::find_label(const std::string& name) const { return find_name(label_names, name); }
int Csg::find_state(const std::string& name) const { return find_name(state_names, name); }
int Csg::find_reward(const std::string& name) const {
  for (std::size_t r = 0; r < rewards.size(); ++r) {
    if (rewards[r].name == name) return static_cast<int>(r);
  }
  return -1;
}
int Csg::find_action(int player, const std::string& name) const {
  return find_name(action_names[player], name);
}

bool Csg::has_label(int state, int label) const {
  return std::binary_search(state_labels[state].begin(), state_labels[state].end(), label);
}

std::vector<char> Csg::label_states(int label) const {
  std::vector<char> out(num_states(), 0);
  for (int s = 0; s < num_states(); ++s) out[s] = has_label(s, label);
  return out;
}

int Csg::choice_index(int state, const std::vector<int>& joint) const {
  if (static_cast<int>(joint.size()) != num_players()) return -1;
  int index = 0;
  for (int p = 0; p < num_players(); ++p) {
    const auto& avail = available[state][p];
    auto it = std::lower_bound(avail.begin(), avail.end(), joint[p]);
    if (it == avail.end() || *it != joint[p]) return -1;
    index = index * static_cast<int>(avail.size()) + static_cast<int>(it - avail.begin());
  }
  return index;
}

std::vector<Diagnostic> validate_csg(const Csg& g) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string rule, int s, std::string detail) {
    out.push_back({std::move(rule), s, std::move(detail)});
  };
  const int n = g.num_players(), ns = g.num_states();
  if (n < 1) report("players", -1, "game has no players");
  if (static_cast<int>(g.action_names.size()) != n) {
    report("players", -1, "action name table does not match player count");
    return out;
  }
  for (int p = 0; p < n; ++p) {
    if (g.action_names[p].empty()) report("players", -1, "player " + g.player_names[p] + " lacks the idle action");
  }
  if (ns < 1) {
    report("states", -1, "game has no states");
    return out;
  }
  if (g.initial < 0 || g.initial >= ns) report("initial", -1, "initial state out of range");
  if (static_cast<int>(g.available.size()) != ns || static_cast<int>(g.choices.size()) != ns ||
      static_cast<int>(g.state_labels.size()) != ns) {
    report("states", -1, "per-state tables do not match the state count");
    return out;
  }
  if (!g.valuations.empty() && static_cast<int>(g.valuations.size()) != ns) {
    report("states", -1, "valuation table does not match the state count");
  }
  for (int s = 0; s < ns; ++s) {
    const std::string& sn = g.state_names[s];
    for (int l : g.state_labels[s]) {
      if (l < 0 || l >= static_cast<int>(g.label_names.size())) report("labels", s, "unknown label id in " + sn);
    }
    if (!std::is_sorted(g.state_labels[s].begin(), g.state_labels[s].end())) {
      report("labels", s, "label ids of " + sn + " not sorted");
    }
    if (static_cast<int>(g.available[s].size()) != n) {
      report("actions", s, "action assignment of " + sn + " has wrong arity");
      continue;
    }
    std::size_t expected = 1;
    bool ok = true;
    for (int p = 0; p < n; ++p) {
      const auto& a = g.available[s][p];
      if (a.empty()) {
        report("actions", s, "player " + g.player_names[p] + " has no action in " + sn);
        ok = false;
        continue;
      }
      if (!std::is_sorted(a.begin(), a.end()) || std::adjacent_find(a.begin(), a.end()) != a.end()) {
        report("actions", s, "actions of " + g.player_names[p] + " in " + sn + " not sorted/unique");
        ok = false;
      }
      for (int id : a) {
        if (id < 0 || id >= static_cast<int>(g.action_names[p].size())) {
          report("actions", s, "unknown action id for " + g.player_names[p] + " in " + sn);
          ok = false;
        }
      }
      if (a.size() > 1 && a.front() == kIdle) {
        report("actions", s, "idle offered alongside other actions to " + g.player_names[p] + " in " + sn);
      }
      expected *= a.size();
    }
    if (!ok) continue;
    if (g.choices[s].size() != expected) {
      report("transitions", s, sn + " defines " + std::to_string(g.choices[s].size()) +
                                   " joint actions, expected " + std::to_string(expected));
      continue;
    }
    std::size_t k = 0;
    for_each_tuple(g.available[s], [&](const std::vector<int>& joint) {
      const Choice& c = g.choices[s][k++];
      if (c.joint != joint) {
        report("transitions", s, "joint actions of " + sn + " out of canonical order");
        return;
      }
      double sum = 0.0;
      for (const auto& succ : c.successors) {
        if (succ.state < 0 || succ.state >= ns) {
          report("transitions", s, "successor out of range in " + sn);
          continue;
        }
        if (!std::isfinite(succ.prob) || succ.prob < 0.0 || succ.prob > 1.0) {
          report("probability", s, "probability " + format_number(succ.prob) + " in " + sn);
        }
        sum += succ.prob;
      }
      if (std::abs(sum - 1.0) > kModelTolerance) {
        report("distribution sum", s, "successor probabilities of " + sn + " sum to " + format_number(sum));
      }
    });
  }
  for (const auto& r : g.rewards) {
    if (static_cast<int>(r.state_rewards.size()) != ns || static_cast<int>(r.action_rewards.size()) != ns) {
      report("rewards", -1, "reward structure " + r.name + " has wrong size");
      continue;
    }
    for (int s = 0; s < ns; ++s) {
      if (!std::isfinite(r.state_rewards[s])) report("rewards", s, "non-finite state reward in " + r.name);
      if (r.action_rewards[s].size() != g.choices[s].size()) {
        report("rewards", s, "action rewards of " + r.name + " do not match the transitions");
        continue;
      }
      for (double v : r.action_rewards[s]) {
        if (!std::isfinite(v)) report("rewards", s, "non-finite action reward in " + r.name);
      }
    }
  }
  return out;
}

void require_valid(const Csg& game) {
  auto diags = validate_csg(game);
  if (diags.empty()) return;
  std::string msg = "invalid game:";
  for (std::size_t i = 0; i < diags.size() && i < 5; ++i) msg += " [" + diags[i].rule + "] " + diags[i].detail + ";";
  throw InputError(msg);
}

const std::vector<int>& available_actions(const Csg& game, int state, int player) {
  if (state < 0 || state >= game.num_states()) throw InputError("unknown state " + std::to_string(state));
  if (player < 0 || player >= game.num_players()) throw InputError("unknown player " + std::to_string(player));
  return game.available[state][player];
}

CoalitionGame build_coalition_game(const Csg& game, const Partition& partition) {
  const int n = game.num_players();
  std::vector<int> owner(n, -1);
  CoalitionGame out;
  for (std::size_t c = 0; c < partition.size(); ++c) {
    if (partition[c].empty()) throw InputError("empty coalition");
    for (int p : partition[c]) {
      if (p < 0 || p >= n) throw InputError("unknown player " + std::to_string(p + 1) + " in coalition");
      if (owner[p] >= 0) throw InputError("player " + game.player_names[p] + " appears in two coalitions");
      owner[p] = static_cast<int>(c);
    }
    out.coalitions.push_back(partition[c]);
  }
  std::vector<int> rest;
  for (int p = 0; p < n; ++p) {
    if (owner[p] < 0) rest.push_back(p);
  }
  if (!rest.empty()) out.coalitions.push_back(rest);
  const int m = static_cast<int>(out.coalitions.size());

  Csg& g = out.game;
  g.state_names = game.state_names;
  g.initial = game.initial;
  g.label_names = game.label_names;
  g.state_labels = game.state_labels;
  g.variable_names = game.variable_names;
  g.valuations = game.valuations;
  g.player_names.resize(m);
  g.action_names.resize(m);
  out.members.resize(m);
  // Per coalition: member-action tuple -> coalition action id.
  std::vector<std::map<std::vector<int>, int>> ids(m);
  for (int c = 0; c < m; ++c) {
    const auto& mem = out.coalitions[c];
    if (mem.size() == 1) {
      int p = mem[0];
      g.player_names[c] = game.player_names[p];
      g.action_names[c] = game.action_names[p];
      for (int a = 0; a < static_cast<int>(game.action_names[p].size()); ++a) {
        out.members[c].push_back({a});
        ids[c][{a}] = a;
      }
      continue;
    }
    std::vector<std::string> names;
    std::vector<std::vector<int>> sets;
    for (int p : mem) {
      names.push_back(game.player_names[p]);
      std::vector<int> all(game.action_names[p].size());
      for (std::size_t a = 0; a < all.size(); ++a) all[a] = static_cast<int>(a);
      sets.push_back(std::move(all));
    }
    g.player_names[c] = join(names, ",");
    for_each_tuple(sets, [&](const std::vector<int>& tuple) {
      int id = static_cast<int>(out.members[c].size());
      std::string name;
      if (id != kIdle) {
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < mem.size(); ++i) {
          parts.push_back(tuple[i] == kIdle ? "-" : game.action_names[mem[i]][tuple[i]]);
        }
        name = "(" + join(parts, ",") + ")";
      }
      g.action_names[c].push_back(name);
      out.members[c].push_back(tuple);
      ids[c][tuple] = id;
    });
  }

  const int ns = game.num_states();
  g.available.resize(ns);
  g.choices.resize(ns);
  out.origin.resize(ns);
  for (int s = 0; s < ns; ++s) {
    g.available[s].resize(m);
    for (int c = 0; c < m; ++c) {
      std::vector<std::vector<int>> sets;
      for (int p : out.coalitions[c]) sets.push_back(game.available[s][p]);
      std::vector<int>& avail = g.available[s][c];
      for_each_tuple(sets, [&](const std::vector<int>& tuple) { avail.push_back(ids[c].at(tuple)); });
      std::sort(avail.begin(), avail.end());
    }
    for_each_tuple(g.available[s], [&](const std::vector<int>& joint) {
      std::vector<int> original(n);
      for (int c = 0; c < m; ++c) {
        const auto& tuple = out.members[c][joint[c]];
        for (std::size_t i = 0; i < tuple.size(); ++i) original[out.coalitions[c][i]] = tuple[i];
      }
      int k = game.choice_index(s, original);
      if (k < 0) throw std::logic_error("coalition joint action without original transition");
      g.choices[s].push_back({joint, game.choices[s][k].successors});
      out.origin[s].push_back(k);
    });
  }
  for (const auto& r : game.rewards) {
    RewardStructure nr{r.name, r.state_rewards, {}};
    nr.action_rewards.resize(ns);
    for (int s = 0; s < ns; ++s) {
      for (int k : out.origin[s]) nr.action_rewards[s].push_back(r.action_rewards[s][k]);
    }
    g.rewards.push_back(std::move(nr));
  }
  return out;
}

NormalFormGame local_nfg(const Csg& game, int state, const std::vector<std::vector<double>>& continuation,
                         const std::vector<std::vector<double>>* immediate) {
  const int n = game.num_players();
  if (static_cast<int>(continuation.size()) != game.num_states()) {
    throw std::logic_error("continuation values missing for some states");
  }
  std::vector<std::vector<std::string>> names(n);
  for (int p = 0; p < n; ++p) {
    for (int a : game.available[state][p]) {
      names[p].push_back(a == kIdle ? "-" : game.action_names[p][a]);
    }
  }
  NormalFormGame nfg(names);
  for (int k = 0; k < game.num_choices(state); ++k) {
    for (int i = 0; i < n; ++i) {
      double u = immediate ? (*immediate)[i][k] : 0.0;
      for (const auto& succ : game.choices[state][k].successors) {
        const auto& cont = continuation[succ.state];
        if (static_cast<int>(cont.size()) != n) {
          throw std::logic_error("continuation value missing for state " + game.state_names[succ.state]);
        }
        u += succ.prob * cont[i];
      }
      nfg.set_utility(k, i, u);
    }
  }
  return nfg;
}

}  // namespace csg
