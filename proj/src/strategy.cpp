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

#include "csgcheck/strategy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "csgcheck/error.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {

int SynthesizedStrategy::next_memory(int memory, int next_state) const {
  switch (memory_kind) {
    case MemoryKind::kNone:
      return 0;
    case MemoryKind::kSteps:
      return std::max(memory - 1, 0);
    case MemoryKind::kFlags:
      for (std::size_t c = 0; c < decided.size(); ++c) {
        if (decided[c][next_state]) memory |= 1 << c;
      }
      return memory;
  }
  return 0;
}

const StrategyEntry* SynthesizedStrategy::find(int state, int memory) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), std::make_pair(state, memory),
                             [](const StrategyEntry& e, const std::pair<int, int>& key) {
                               return std::make_pair(e.state, e.memory) < key;
                             });
  if (it == entries.end() || it->state != state || it->memory != memory) return nullptr;
  return &*it;
}

void SynthesizedStrategy::prune(const Csg& game) {
  std::sort(entries.begin(), entries.end(), [](const StrategyEntry& a, const StrategyEntry& b) {
    return std::make_pair(a.state, a.memory) < std::make_pair(b.state, b.memory);
  });
  std::set<std::pair<int, int>> seen{{game.initial, initial_memory}};
  std::deque<std::pair<int, int>> queue{{game.initial, initial_memory}};
  while (!queue.empty()) {
    auto [s, m] = queue.front();
    queue.pop_front();
    for (const auto& c : game.choices[s]) {
      for (const auto& t : c.successors) {
        std::pair<int, int> next{t.state, next_memory(m, t.state)};
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
  }
  std::erase_if(entries, [&](const StrategyEntry& e) { return !seen.count({e.state, e.memory}); });
}

Partition strategy_partition(const SynthesizedStrategy& strategy, const Csg& game) {
  Partition out;
  for (const auto& members : strategy.coalitions) {
    std::vector<int> ids;
    for (const auto& name : members) {
      int p = game.find_player(name);
      if (p < 0) throw InputError("strategy names unknown player '" + name + "'");
      ids.push_back(p);
    }
    out.push_back(std::move(ids));
  }
  return out;
}

std::vector<double> choice_distribution(const Csg& cg, const StrategyEntry& entry, bool joint) {
  const int s = entry.state;
  if (joint) return entry.joint;
  std::vector<double> dist(cg.num_choices(s), 1.0);
  const int m = cg.num_players();
  for (int k = 0; k < cg.num_choices(s); ++k) {
    const auto& alpha = cg.choices[s][k].joint;
    for (int c = 0; c < m; ++c) {
      const auto& avail = cg.available[s][c];
      auto pos = std::lower_bound(avail.begin(), avail.end(), alpha[c]) - avail.begin();
      dist[k] *= entry.local[c][pos];
    }
  }
  return dist;
}

namespace {

const char* memory_name(MemoryKind k) {
  switch (k) {
    case MemoryKind::kNone: return "none";
    case MemoryKind::kSteps: return "steps";
    case MemoryKind::kFlags: return "flags";
  }
  return "none";
}

MemoryKind parse_memory(const std::string& s) {
  if (s == "none") return MemoryKind::kNone;
  if (s == "steps") return MemoryKind::kSteps;
  if (s == "flags") return MemoryKind::kFlags;
  throw InputError("unknown memory_kind '" + s + "'");
}

int state_id(const Csg& game, const nlohmann::json& v) {
  if (!v.is_string()) throw InputError("state must be given by name");
  int s = game.find_state(v.get<std::string>());
  if (s < 0) throw InputError("strategy names unknown state " + v.get<std::string>());
  return s;
}

int action_id(const Csg& cg, int c, const nlohmann::json& v) {
  if (!v.is_string()) throw InputError("action must be a string");
  int a = cg.find_action(c, v.get<std::string>());
  if (a < 0) throw InputError("strategy names unknown action '" + v.get<std::string>() + "'");
  return a;
}

double probability(const nlohmann::json& v) {
  if (!v.is_number()) throw InputError("probability must be a number");
  double p = v.get<double>();
  if (!(p >= -kStrategyTolerance && p <= 1 + kStrategyTolerance)) throw InputError("probability outside [0,1]");
  return p;
}

}  // namespace

ordered_json strategy_to_json(const SynthesizedStrategy& st, const Csg& game) {
  CoalitionGame cgame = build_coalition_game(game, strategy_partition(st, game));
  const Csg& cg = cgame.game;
  ordered_json doc;
  doc["kind"] = st.joint ? "joint" : "profile";
  doc["coalitions"] = st.coalitions;
  doc["memory_kind"] = memory_name(st.memory_kind);
  doc["memory_size"] = st.memory_size;
  doc["initial_memory"] = st.initial_memory;
  if (st.memory_kind == MemoryKind::kFlags) {
    ordered_json decided = ordered_json::array();
    for (const auto& flags : st.decided) {
      ordered_json names = ordered_json::array();
      for (int s = 0; s < game.num_states(); ++s) {
        if (flags[s]) names.push_back(game.state_names[s]);
      }
      decided.push_back(std::move(names));
    }
    doc["decided"] = std::move(decided);
  }
  ordered_json entries = ordered_json::array();
  for (const auto& e : st.entries) {
    ordered_json item;
    item["state"] = game.state_names[e.state];
    item["memory"] = e.memory;
    ordered_json rows = ordered_json::array();
    if (st.joint) {
      for (int k = 0; k < cg.num_choices(e.state); ++k) {
        ordered_json names = ordered_json::array();
        for (int c = 0; c < cg.num_players(); ++c) names.push_back(cg.action_names[c][cg.choices[e.state][k].joint[c]]);
        rows.push_back({{"joint_action", std::move(names)}, {"prob", e.joint[k]}});
      }
    } else {
      for (int c = 0; c < cg.num_players(); ++c) {
        ordered_json dist = ordered_json::array();
        const auto& avail = cg.available[e.state][c];
        for (std::size_t a = 0; a < avail.size(); ++a) {
          dist.push_back({{"action", cg.action_names[c][avail[a]]}, {"prob", e.local[c][a]}});
        }
        rows.push_back(std::move(dist));
      }
    }
    item["rows"] = std::move(rows);
    entries.push_back(std::move(item));
  }
  doc["entries"] = std::move(entries);
  return doc;
}

SynthesizedStrategy strategy_from_json(const nlohmann::json& doc, const Csg& game) {
  SynthesizedStrategy st;
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind != "profile" && kind != "joint") throw InputError("kind must be \"profile\" or \"joint\"");
    st.joint = kind == "joint";
    st.coalitions = doc.at("coalitions").get<std::vector<std::vector<std::string>>>();
    st.memory_kind = parse_memory(doc.at("memory_kind").get<std::string>());
    st.memory_size = doc.at("memory_size").get<int>();
    st.initial_memory = doc.at("initial_memory").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed strategy file: ") + e.what());
  }
  Partition partition = strategy_partition(st, game);
  std::set<int> covered;
  for (const auto& c : partition) covered.insert(c.begin(), c.end());
  if (static_cast<int>(covered.size()) != game.num_players()) {
    throw InputError("strategy coalitions do not cover every player once");
  }
  CoalitionGame cgame = build_coalition_game(game, partition);
  const Csg& cg = cgame.game;
  const int m = cg.num_players();
  if (st.memory_size < 1 || st.initial_memory < 0 || st.initial_memory >= st.memory_size) {
    throw InputError("bad memory size or initial memory");
  }
  try {
    if (st.memory_kind == MemoryKind::kFlags) {
      const auto& decided = doc.at("decided");
      if (!decided.is_array() || static_cast<int>(decided.size()) != m) {
        throw InputError("decided needs one state list per coalition");
      }
      for (const auto& list : decided) {
        std::vector<char> flags(game.num_states(), 0);
        for (const auto& s : list) flags[state_id(game, s)] = 1;
        st.decided.push_back(std::move(flags));
      }
      if (st.memory_size != 1 << m) throw InputError("flags memory needs 2^coalitions values");
    }
    for (const auto& item : doc.at("entries")) {
      StrategyEntry e;
      e.state = state_id(game, item.at("state"));
      e.memory = item.at("memory").get<int>();
      if (e.memory < 0 || e.memory >= st.memory_size) throw InputError("memory value out of range");
      const auto& rows = item.at("rows");
      const int s = e.state;
      if (st.joint) {
        e.joint.assign(cg.num_choices(s), 0.0);
        std::vector<char> seen(cg.num_choices(s), 0);
        for (const auto& row : rows) {
          const auto& names = row.at("joint_action");
          if (!names.is_array() || static_cast<int>(names.size()) != m) throw InputError("joint_action has wrong arity");
          std::vector<int> alpha;
          for (int c = 0; c < m; ++c) alpha.push_back(action_id(cg, c, names[c]));
          int k = cg.choice_index(s, alpha);
          if (k < 0) throw InputError("joint action not available in state " + game.state_names[s]);
          if (seen[k]++) throw InputError("duplicate joint action in state " + game.state_names[s]);
          e.joint[k] = probability(row.at("prob"));
        }
        if (!is_distribution(e.joint)) throw InputError("joint row of " + game.state_names[s] + " is not a distribution");
      } else {
        if (!rows.is_array() || static_cast<int>(rows.size()) != m) throw InputError("profile rows need one list per coalition");
        for (int c = 0; c < m; ++c) {
          const auto& avail = cg.available[s][c];
          MixedStrategy dist(avail.size(), 0.0);
          std::vector<char> seen(avail.size(), 0);
          for (const auto& cell : rows[c]) {
            int a = action_id(cg, c, cell.at("action"));
            auto pos = std::lower_bound(avail.begin(), avail.end(), a);
            if (pos == avail.end() || *pos != a) {
              throw InputError("action " + cg.action_names[c][a] + " not available in state " + game.state_names[s]);
            }
            auto i = pos - avail.begin();
            if (seen[i]++) throw InputError("duplicate action in state " + game.state_names[s]);
            dist[i] = probability(cell.at("prob"));
          }
          if (!is_distribution(dist)) throw InputError("row of " + game.state_names[s] + " is not a distribution");
          e.local.push_back(std::move(dist));
        }
      }
      st.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed strategy file: ") + e.what());
  }
  std::vector<StrategyEntry> sorted = st.entries;
  std::sort(sorted.begin(), sorted.end(), [](const StrategyEntry& a, const StrategyEntry& b) {
    return std::make_pair(a.state, a.memory) < std::make_pair(b.state, b.memory);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].state == sorted[i - 1].state && sorted[i].memory == sorted[i - 1].memory) {
      throw InputError("duplicate entry for state " + game.state_names[sorted[i].state]);
    }
  }
  st.entries = std::move(sorted);
  return st;
}

std::string export_strategy(const SynthesizedStrategy& strategy, const Csg& game) {
  return write_json(strategy_to_json(strategy, game));
}

SynthesizedStrategy import_strategy(std::string_view text, const Csg& game) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("strategy file is not JSON: ") + e.what());
  }
  return strategy_from_json(doc, game);
}

}  // namespace csg
