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

#include "csgcheck/nfg.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "csgcheck/error.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {

NormalFormGame::NormalFormGame(std::vector<std::vector<std::string>> action_names)
    : actions_(std::move(action_names)) {
  if (actions_.empty()) throw InputError("normal form game needs at least one player");
  strides_.assign(actions_.size(), 1);
  num_profiles_ = 1;
  for (int p = num_players() - 1; p >= 0; --p) {
    if (actions_[p].empty()) {
      throw InputError("player " + std::to_string(p + 1) + " has no actions");
    }
    strides_[p] = num_profiles_;
    num_profiles_ *= actions_[p].size();
  }
  utilities_.assign(num_profiles_ * actions_.size(), 0.0);
}

std::size_t NormalFormGame::index(std::span<const int> joint) const {
  if (joint.size() != actions_.size()) throw InputError("joint action has wrong arity");
  std::size_t result = 0;
  for (std::size_t p = 0; p < joint.size(); ++p) {
    if (joint[p] < 0 || joint[p] >= static_cast<int>(actions_[p].size())) {
      throw InputError("action index out of range for player " + std::to_string(p + 1));
    }
    result += static_cast<std::size_t>(joint[p]) * strides_[p];
  }
  return result;
}

std::vector<int> NormalFormGame::decode(std::size_t index) const {
  std::vector<int> joint(actions_.size());
  for (std::size_t p = 0; p < actions_.size(); ++p) {
    joint[p] = static_cast<int>((index / strides_[p]) % actions_[p].size());
  }
  return joint;
}

bool is_distribution(std::span<const double> probabilities, double tolerance) {
  double sum = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < -tolerance) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

void validate_profile(const NormalFormGame& game, const StrategyProfile& profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw InputError("profile length differs from player count");
  }
  for (int p = 0; p < game.num_players(); ++p) {
    if (static_cast<int>(profile[p].size()) != game.num_actions(p) ||
        !is_distribution(profile[p])) {
      throw InputError("strategy of player " + std::to_string(p + 1) +
                       " is not a distribution over its actions");
    }
  }
}

void validate_joint(const NormalFormGame& game, const JointDistribution& joint) {
  if (joint.size() != game.num_profiles() || !is_distribution(joint)) {
    throw InputError("joint strategy is not a distribution over joint actions");
  }
}

JointDistribution product_distribution(const NormalFormGame& game,
                                       const StrategyProfile& profile) {
  JointDistribution joint(game.num_profiles(), 1.0);
  for (std::size_t k = 0; k < joint.size(); ++k) {
    for (int p = 0; p < game.num_players(); ++p) {
      joint[k] *= profile[p][game.action_of(k, p)];
    }
  }
  return joint;
}

std::vector<double> expected_utilities(const NormalFormGame& game,
                                       const JointDistribution& joint) {
  std::vector<double> values(game.num_players(), 0.0);
  for (std::size_t k = 0; k < game.num_profiles(); ++k) {
    if (joint[k] == 0.0) continue;
    for (int p = 0; p < game.num_players(); ++p) {
      values[p] += joint[k] * game.utility(k, p);
    }
  }
  return values;
}

std::vector<double> expected_utilities(const NormalFormGame& game,
                                       const StrategyProfile& profile) {
  return expected_utilities(game, product_distribution(game, profile));
}

NormalFormGame parse_nfg_table(std::string_view text) {
  struct Row {
    std::vector<std::string> actions;
    std::vector<double> utilities;
    int line;
  };
  std::vector<Row> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::size_t arity = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, 1, "expected ':'");
    Row row{split_whitespace(body.substr(0, colon)), {}, line_no};
    for (const auto& field : split_whitespace(body.substr(colon + 1))) {
      try {
        row.utilities.push_back(parse_double(field));
      } catch (const InputError&) {
        throw ParseError(line_no, static_cast<int>(colon) + 2, "bad utility '" + field + "'");
      }
    }
    if (row.actions.empty() || row.actions.size() != row.utilities.size()) {
      throw ParseError(line_no, 1, "need one utility per player");
    }
    if (arity == 0) arity = row.actions.size();
    if (row.actions.size() != arity) throw ParseError(line_no, 1, "inconsistent player count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("empty normal form game table");

  std::vector<std::vector<std::string>> names(arity);
  std::vector<std::map<std::string, int>> ids(arity);
  for (const auto& row : rows) {
    for (std::size_t p = 0; p < arity; ++p) {
      if (ids[p].emplace(row.actions[p], static_cast<int>(names[p].size())).second) {
        names[p].push_back(row.actions[p]);
      }
    }
  }
  NormalFormGame game(names);
  std::vector<char> seen(game.num_profiles(), 0);
  for (const auto& row : rows) {
    std::vector<int> joint(arity);
    for (std::size_t p = 0; p < arity; ++p) joint[p] = ids[p].at(row.actions[p]);
    std::size_t k = game.index(joint);
    if (seen[k]) throw ParseError(row.line, 1, "duplicate joint action");
    seen[k] = 1;
    for (std::size_t p = 0; p < arity; ++p) {
      game.set_utility(k, static_cast<int>(p), row.utilities[p]);
    }
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      std::vector<std::string> missing;
      auto joint = game.decode(k);
      for (std::size_t p = 0; p < arity; ++p) missing.push_back(names[p][joint[p]]);
      throw InputError("no utilities for joint action (" + join(missing, ",") + ")");
    }
  }
  return game;
}

std::string format_nfg_table(const NormalFormGame& game) {
  std::string out;
  for (std::size_t k = 0; k < game.num_profiles(); ++k) {
    auto joint = game.decode(k);
    for (int p = 0; p < game.num_players(); ++p) {
      out += game.action_names(p)[joint[p]];
      out += ' ';
    }
    out += ':';
    for (int p = 0; p < game.num_players(); ++p) {
      out += ' ';
      out += format_number(game.utility(k, p));
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// text helpers

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_number17(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string_view trim(std::string_view text) {
  const char* ws = " \t\r\n";
  auto begin = text.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(ws);
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.emplace_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double value = 0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  auto res = std::from_chars(begin, text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text) {
  text = trim(text);
  long long value = 0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  auto res = std::from_chars(begin, text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace csg
