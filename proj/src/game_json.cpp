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

#include "csgcheck/game_json.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "csgcheck/error.hpp"

namespace csg {
namespace {

ordered_json joint_to_json(const Csg& g, const std::vector<int>& joint) {
  ordered_json out = ordered_json::array();
  for (int p = 0; p < g.num_players(); ++p) {
    if (joint[p] == kIdle) {
      out.push_back(nullptr);
    } else {
      out.push_back(g.action_names[p][joint[p]]);
    }
  }
  return out;
}

const nlohmann::json& field(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(where + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

int state_ref(const nlohmann::json& v, int ns, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": state must be an integer index");
  int s = v.get<int>();
  if (s < 0 || s >= ns) throw InputError(where + ": state index " + std::to_string(s) + " out of range");
  return s;
}

std::vector<int> joint_from_json(const Csg& g, const nlohmann::json& v, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != g.num_players()) {
    throw InputError(where + ": joint_action must list one entry per player");
  }
  std::vector<int> joint(g.num_players());
  for (int p = 0; p < g.num_players(); ++p) {
    if (v[p].is_null()) {
      joint[p] = kIdle;
      continue;
    }
    if (!v[p].is_string()) throw InputError(where + ": action names must be strings or null");
    int a = g.find_action(p, v[p].get<std::string>());
    if (a <= 0) throw InputError(where + ": unknown action '" + v[p].get<std::string>() + "'");
    joint[p] = a;
  }
  return joint;
}

}  // namespace

ordered_json game_to_json(const Csg& g) {
  ordered_json doc;
  ordered_json players = ordered_json::array();
  for (int p = 0; p < g.num_players(); ++p) {
    ordered_json acts = ordered_json::array();
    for (std::size_t a = 1; a < g.action_names[p].size(); ++a) acts.push_back(g.action_names[p][a]);
    players.push_back({{"name", g.player_names[p]}, {"actions", acts}});
  }
  doc["players"] = players;
  doc["labels"] = g.label_names;
  if (!g.variable_names.empty()) doc["variables"] = g.variable_names;
  ordered_json states = ordered_json::array();
  for (int s = 0; s < g.num_states(); ++s) {
    ordered_json st;
    st["name"] = g.state_names[s];
    ordered_json labels = ordered_json::array();
    for (int l : g.state_labels[s]) labels.push_back(g.label_names[l]);
    st["labels"] = labels;
    if (!g.variable_names.empty()) st["values"] = g.valuations[s];
    states.push_back(st);
  }
  doc["states"] = states;
  doc["initial"] = g.initial;
  ordered_json transitions = ordered_json::array();
  for (int s = 0; s < g.num_states(); ++s) {
    for (const auto& c : g.choices[s]) {
      ordered_json succ = ordered_json::array();
      for (const auto& x : c.successors) succ.push_back({{"state", x.state}, {"prob", x.prob}});
      transitions.push_back({{"state", s}, {"joint_action", joint_to_json(g, c.joint)}, {"successors", succ}});
    }
  }
  doc["transitions"] = transitions;
  ordered_json rewards = ordered_json::array();
  for (const auto& r : g.rewards) {
    ordered_json ar = ordered_json::array();
    for (int s = 0; s < g.num_states(); ++s) {
      for (int k = 0; k < g.num_choices(s); ++k) {
        double v = r.action_rewards[s][k];
        if (v != 0.0) {
          ar.push_back({{"state", s}, {"joint_action", joint_to_json(g, g.choices[s][k].joint)}, {"value", v}});
        }
      }
    }
    rewards.push_back({{"name", r.name}, {"state_rewards", r.state_rewards}, {"action_rewards", ar}});
  }
  doc["rewards"] = rewards;
  return doc;
}

Csg game_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("game document must be a JSON object");
  Csg g;
  try {
    for (const auto& p : field(doc, "players", "game")) {
      g.player_names.push_back(field(p, "name", "player").get<std::string>());
      std::vector<std::string> acts{""};
      for (const auto& a : field(p, "actions", "player " + g.player_names.back())) {
        auto name = a.get<std::string>();
        if (name.empty() || std::find(acts.begin(), acts.end(), name) != acts.end()) {
          throw InputError("player " + g.player_names.back() + ": empty or duplicate action '" + name + "'");
        }
        acts.push_back(name);
      }
      g.action_names.push_back(std::move(acts));
    }
    if (g.player_names.empty()) throw InputError("game has no players");
    if (doc.contains("labels")) g.label_names = doc.at("labels").get<std::vector<std::string>>();
    if (doc.contains("variables")) g.variable_names = doc.at("variables").get<std::vector<std::string>>();
    const auto& states = field(doc, "states", "game");
    for (const auto& st : states) {
      g.state_names.push_back(field(st, "name", "state").get<std::string>());
      std::vector<int> labels;
      if (st.contains("labels")) {
        for (const auto& l : st.at("labels")) {
          auto name = l.get<std::string>();
          int id = g.find_label(name);
          if (id < 0) {
            id = static_cast<int>(g.label_names.size());
            g.label_names.push_back(name);
          }
          labels.push_back(id);
        }
      }
      std::sort(labels.begin(), labels.end());
      labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
      g.state_labels.push_back(std::move(labels));
      if (!g.variable_names.empty()) {
        auto values = field(st, "values", "state " + g.state_names.back()).get<std::vector<std::int64_t>>();
        if (values.size() != g.variable_names.size()) {
          throw InputError("state " + g.state_names.back() + ": wrong number of values");
        }
        g.valuations.push_back(std::move(values));
      }
    }
    const int ns = g.num_states();
    if (ns == 0) throw InputError("game has no states");
    g.initial = state_ref(field(doc, "initial", "game"), ns, "initial");

    std::vector<std::map<std::vector<int>, std::vector<Successor>>> defined(ns);
    for (const auto& t : field(doc, "transitions", "game")) {
      int s = state_ref(field(t, "state", "transition"), ns, "transition");
      std::string where = "transition at state " + g.state_names[s];
      auto joint = joint_from_json(g, field(t, "joint_action", where), where);
      std::vector<Successor> succ;
      for (const auto& x : field(t, "successors", where)) {
        succ.push_back({state_ref(field(x, "state", where), ns, where), field(x, "prob", where).get<double>()});
      }
      if (!defined[s].emplace(joint, std::move(succ)).second) throw InputError(where + ": duplicate joint action");
    }
    g.available.resize(ns);
    g.choices.resize(ns);
    for (int s = 0; s < ns; ++s) {
      if (defined[s].empty()) throw InputError("state " + g.state_names[s] + " has no transitions");
      std::vector<std::set<int>> sets(g.num_players());
      for (const auto& [joint, succ] : defined[s]) {
        for (int p = 0; p < g.num_players(); ++p) sets[p].insert(joint[p]);
      }
      for (int p = 0; p < g.num_players(); ++p) g.available[s].emplace_back(sets[p].begin(), sets[p].end());
      // std::map iterates joint tuples lexicographically, which is the
      // canonical choice order once the product is complete.
      std::size_t product = 1;
      for (const auto& a : g.available[s]) product *= a.size();
      if (product != defined[s].size()) {
        throw InputError("state " + g.state_names[s] + ": joint actions do not cover the product of available actions");
      }
      for (auto& [joint, succ] : defined[s]) g.choices[s].push_back({joint, std::move(succ)});
    }
    if (doc.contains("rewards")) {
      for (const auto& r : doc.at("rewards")) {
        RewardStructure rs;
        rs.name = field(r, "name", "reward").get<std::string>();
        if (g.find_reward(rs.name) >= 0) throw InputError("duplicate reward structure " + rs.name);
        if (r.contains("state_rewards")) {
          rs.state_rewards = r.at("state_rewards").get<std::vector<double>>();
          if (static_cast<int>(rs.state_rewards.size()) != ns) {
            throw InputError("reward " + rs.name + ": state_rewards must have one entry per state");
          }
        } else {
          rs.state_rewards.assign(ns, 0.0);
        }
        rs.action_rewards.resize(ns);
        for (int s = 0; s < ns; ++s) rs.action_rewards[s].assign(g.num_choices(s), 0.0);
        if (r.contains("action_rewards")) {
          for (const auto& a : r.at("action_rewards")) {
            std::string where = "reward " + rs.name;
            int s = state_ref(field(a, "state", where), ns, where);
            int k = g.choice_index(s, joint_from_json(g, field(a, "joint_action", where), where));
            if (k < 0) throw InputError(where + ": action reward on an undefined transition");
            rs.action_rewards[s][k] = field(a, "value", where).get<double>();
          }
        }
        g.rewards.push_back(std::move(rs));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed game document: ") + e.what());
  }
  require_valid(g);
  return g;
}

std::string export_game(const Csg& game) { return write_json(game_to_json(game)); }

Csg import_game(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("game file is not valid JSON: ") + e.what());
  }
  return game_from_json(doc);
}

}  // namespace csg
