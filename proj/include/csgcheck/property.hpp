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
#include "csgcheck/equilibria.hpp"
#include "csgcheck/expr.hpp"

namespace csg {

enum class PathOp { kNext, kUntil, kBoundedUntil };

// X right | left U right | left U<=bound right. "F phi" is stored as
// "true U phi".
struct PathFormula {
  PathOp op = PathOp::kUntil;
  ExprPtr left;
  ExprPtr right;
  ExprPtr bound;
  bool operator==(const PathFormula& o) const;
};

enum class RewardOp { kInstant, kCumulative, kReach };

// I=bound | C<=bound | F target
struct RewardFormula {
  RewardOp op = RewardOp::kReach;
  ExprPtr bound;
  ExprPtr target;
  bool operator==(const RewardFormula& o) const;
};

struct Objective {
  bool is_reward = false;
  std::string reward;  // empty: first reward structure
  PathFormula path;
  RewardFormula rew;
  bool operator==(const Objective& o) const = default;
};

enum class Comparison { kLess, kLessEqual, kGreater, kGreaterEqual };

// <<C>> P/R query (one coalition) or <<C1:...:Cm>>(kind,criterion) query
// over a sum of objectives.
struct GameFormula {
  std::vector<std::vector<std::string>> coalitions;  // members as written
  bool equilibrium = false;
  EquilibriumKind kind = EquilibriumKind::kNash;
  Criterion criterion = Criterion::kSocialWelfare;
  bool numeric = false;
  Direction direction = Direction::kMax;  // numeric queries
  Comparison comparison = Comparison::kGreaterEqual;
  ExprPtr threshold;
  std::vector<Objective> objectives;
  int line = 0;
  int column = 0;

  bool operator==(const GameFormula& o) const;
  // Optimization direction implied by a bounded query's comparison.
  Direction effective_direction() const;
};

std::string print_game(const GameFormula& g);
std::shared_ptr<const GameFormula> resolve_game(const GameFormula& g, const Scope& scope);

// A property is a state formula; a numeric query is a game operator at the
// root.
struct Property {
  ExprPtr formula;
  bool operator==(const Property& o) const { return expr_equal(formula, o.formula); }
  const GameFormula* root_game() const {
    return formula && formula->kind == ExprKind::kGame ? formula->game.get() : nullptr;
  }
  bool is_numeric() const { return root_game() && root_game()->numeric; }
};

Property parse_property(std::string_view text);
std::string print_property(const Property& p);

// Lines of a property file; blank lines and `//` comments are skipped.
struct PropertyLine {
  int line = 0;
  std::string text;
};
std::vector<PropertyLine> split_property_file(std::string_view text);

// Empty iff labels, rewards and players exist, coalitions are disjoint and
// nonempty, objective counts match coalition counts, objectives of one
// operator have one type, numeric queries only appear at the root, and game
// operators nest at most two deep.
std::vector<std::string> typecheck(const Property& p, const Csg& game);

// Coalition member names (or 1-based indices) to player ids.
Partition resolve_coalitions(const GameFormula& g, const Csg& game);

// Resolves identifiers against model constants/variables; labels allowed.
Property resolve_property(const Property& p, const Scope& scope);

}  // namespace csg
