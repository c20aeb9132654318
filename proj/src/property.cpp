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

#include "csgcheck/property.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "csgcheck/error.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {
namespace {

ExprPtr game_hook(TokenStream& ts);

ExprPtr state_formula(TokenStream& ts) { return parse_expression(ts, &game_hook); }

PathFormula parse_path(TokenStream& ts) {
  PathFormula p;
  if (ts.is_keyword("X")) {
    ts.next();
    p.op = PathOp::kNext;
    p.right = state_formula(ts);
    return p;
  }
  if (ts.is_keyword("G")) ts.fail("path operator (G is not supported; use the dual F query)");
  if (ts.is_keyword("F")) {
    const Token& t = ts.next();
    p.left = make_literal(Value::of_bool(true), t.line, t.column);
    if (ts.accept_symbol("<=")) {
      p.op = PathOp::kBoundedUntil;
      p.bound = parse_expression(ts);
    } else {
      p.op = PathOp::kUntil;
    }
    p.right = state_formula(ts);
    return p;
  }
  p.left = state_formula(ts);
  ts.expect_keyword("U");
  if (ts.accept_symbol("<=")) {
    p.op = PathOp::kBoundedUntil;
    p.bound = parse_expression(ts);
  } else {
    p.op = PathOp::kUntil;
  }
  p.right = state_formula(ts);
  return p;
}

RewardFormula parse_reward(TokenStream& ts) {
  RewardFormula r;
  if (ts.accept_keyword("I")) {
    ts.expect_symbol("=");
    r.op = RewardOp::kInstant;
    r.bound = parse_expression(ts);
  } else if (ts.accept_keyword("C")) {
    ts.expect_symbol("<=");
    r.op = RewardOp::kCumulative;
    r.bound = parse_expression(ts);
  } else if (ts.accept_keyword("F")) {
    r.op = RewardOp::kReach;
    r.target = state_formula(ts);
  } else {
    ts.fail("reward operator I=k, C<=k or F");
  }
  return r;
}

// Parses "P", "R{"name"}" heads; returns the trailing min/max if glued
// (Pmax, Rmin) or written separately.
struct Head {
  bool reward = false;
  std::string reward_name;
  int direction = 0;  // 0 none, 1 max, -1 min
};

bool at_head(const TokenStream& ts) {
  static const char* heads[] = {"P", "Pmax", "Pmin", "R", "Rmax", "Rmin"};
  if (ts.peek().kind != TokenKind::kIdentifier) return false;
  for (const char* h : heads) {
    if (ts.peek().text == h) return true;
  }
  return false;
}

Head parse_head(TokenStream& ts) {
  Head h;
  std::string word = ts.next().text;
  h.reward = word[0] == 'R';
  if (word.size() > 1) {
    h.direction = word.substr(1) == "max" ? 1 : -1;
  } else if (h.reward && ts.accept_symbol("{")) {
    h.reward_name = ts.expect_string();
    ts.expect_symbol("}");
  }
  if (h.direction == 0 && (ts.is_keyword("max") || ts.is_keyword("min"))) {
    h.direction = ts.next().text == "max" ? 1 : -1;
  }
  return h;
}

// "=?" for numeric queries, otherwise a comparison and threshold.
void parse_query(TokenStream& ts, GameFormula& g, int direction) {
  if (ts.accept_symbol("=?")) {
    if (direction == 0) ts.fail("'min' or 'max' before '=?'");
    g.numeric = true;
    g.direction = direction > 0 ? Direction::kMax : Direction::kMin;
    return;
  }
  if (direction != 0) ts.fail("'=?'");
  static const std::pair<const char*, Comparison> ops[] = {{"<=", Comparison::kLessEqual},
                                                           {">=", Comparison::kGreaterEqual},
                                                           {"<", Comparison::kLess},
                                                           {">", Comparison::kGreater}};
  for (const auto& [sym, cmp] : ops) {
    if (ts.accept_symbol(sym)) {
      g.comparison = cmp;
      g.threshold = parse_expression(ts);
      return;
    }
  }
  ts.fail("'=?' or a comparison");
}

Objective parse_objective(TokenStream& ts, const Head& h) {
  Objective o;
  o.is_reward = h.reward;
  o.reward = h.reward_name;
  ts.expect_symbol("[");
  if (h.reward) {
    o.rew = parse_reward(ts);
  } else {
    o.path = parse_path(ts);
  }
  ts.expect_symbol("]");
  return o;
}

ExprPtr game_hook(TokenStream& ts) {
  if (!ts.is_symbol("<<")) return nullptr;
  const Token& open = ts.next();
  auto g = std::make_shared<GameFormula>();
  g->line = open.line;
  g->column = open.column;
  g->coalitions.emplace_back();
  while (true) {
    const Token& t = ts.peek();
    if (t.kind != TokenKind::kIdentifier && t.kind != TokenKind::kInteger) ts.fail("player name or index");
    g->coalitions.back().push_back(ts.next().text);
    if (ts.accept_symbol(",")) continue;
    if (ts.accept_symbol(":")) {
      g->coalitions.emplace_back();
      continue;
    }
    ts.expect_symbol(">>");
    break;
  }
  if (g->coalitions.size() == 1) {
    if (!at_head(ts)) ts.fail("'P' or 'R'");
    Head h = parse_head(ts);
    parse_query(ts, *g, h.direction);
    g->objectives.push_back(parse_objective(ts, h));
  } else {
    g->equilibrium = true;
    if (ts.is_symbol("(") && (ts.is_keyword("NE", 1) || ts.is_keyword("CE", 1))) {
      ts.next();
      g->kind = ts.next().text == "NE" ? EquilibriumKind::kNash : EquilibriumKind::kCorrelated;
      ts.expect_symbol(",");
      if (ts.accept_keyword("SW")) {
        g->criterion = Criterion::kSocialWelfare;
      } else if (ts.accept_keyword("SF")) {
        g->criterion = Criterion::kSocialFairness;
      } else {
        ts.fail("'SW' or 'SF'");
      }
      ts.expect_symbol(")");
    }
    int direction = 0;
    if (ts.is_keyword("max") || ts.is_keyword("min")) direction = ts.next().text == "max" ? 1 : -1;
    parse_query(ts, *g, direction);
    ts.expect_symbol("(");
    do {
      if (!at_head(ts)) ts.fail("'P' or 'R'");
      const Token& at = ts.peek();
      Head h = parse_head(ts);
      if (h.direction != 0) ts.fail_at(at, "objectives inside an equilibrium query take no min/max");
      g->objectives.push_back(parse_objective(ts, h));
    } while (ts.accept_symbol("+"));
    ts.expect_symbol(")");
  }
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kGame;
  e->game = g;
  e->type = Type::kBool;
  e->line = open.line;
  e->column = open.column;
  return e;
}

std::string wrap(const ExprPtr& e) {
  std::string s = print_expr(e);
  switch (e->kind) {
    case ExprKind::kLiteral:
    case ExprKind::kIdentifier:
    case ExprKind::kVariable:
    case ExprKind::kLabel:
    case ExprKind::kCall:
      return s;
    default:
      return "(" + s + ")";
  }
}

bool is_true(const ExprPtr& e) {
  return e && e->kind == ExprKind::kLiteral && e->literal.type == Type::kBool && e->literal.i == 1;
}

std::string print_path(const PathFormula& p) {
  switch (p.op) {
    case PathOp::kNext:
      return "X " + wrap(p.right);
    case PathOp::kUntil:
      if (is_true(p.left)) return "F " + wrap(p.right);
      return wrap(p.left) + " U " + wrap(p.right);
    case PathOp::kBoundedUntil:
      if (is_true(p.left)) return "F<=" + wrap(p.bound) + " " + wrap(p.right);
      return wrap(p.left) + " U<=" + wrap(p.bound) + " " + wrap(p.right);
  }
  return "";
}

std::string print_reward(const RewardFormula& r) {
  switch (r.op) {
    case RewardOp::kInstant:
      return "I=" + wrap(r.bound);
    case RewardOp::kCumulative:
      return "C<=" + wrap(r.bound);
    case RewardOp::kReach:
      return "F " + wrap(r.target);
  }
  return "";
}

std::string print_objective_head(const Objective& o) {
  if (!o.is_reward) return "P";
  return o.reward.empty() ? "R" : "R{\"" + o.reward + "\"}";
}

std::string print_objective_body(const Objective& o) {
  return "[ " + (o.is_reward ? print_reward(o.rew) : print_path(o.path)) + " ]";
}

std::string print_query(const GameFormula& g) {
  if (g.numeric) return std::string(g.direction == Direction::kMax ? "max" : "min") + "=?";
  const char* op = "";
  switch (g.comparison) {
    case Comparison::kLess: op = "<"; break;
    case Comparison::kLessEqual: op = "<="; break;
    case Comparison::kGreater: op = ">"; break;
    case Comparison::kGreaterEqual: op = ">="; break;
  }
  return op + wrap(g.threshold);
}

int game_depth(const Expr& e) {
  int inner = 0;
  for (const auto& a : e.args) inner = std::max(inner, game_depth(*a));
  if (e.kind != ExprKind::kGame) return inner;
  for (const auto& o : e.game->objectives) {
    for (const ExprPtr* x : {&o.path.left, &o.path.right, &o.rew.target}) {
      if (*x) inner = std::max(inner, game_depth(**x));
    }
  }
  return inner + 1;
}

void visit(const Expr& e, const std::function<void(const Expr&, bool root)>& f, bool root) {
  f(e, root);
  for (const auto& a : e.args) visit(*a, f, false);
  if (e.kind == ExprKind::kGame) {
    for (const auto& o : e.game->objectives) {
      for (const ExprPtr* x : {&o.path.left, &o.path.right, &o.rew.target}) {
        if (*x) visit(**x, f, false);
      }
    }
  }
}

ExprPtr resolve_opt(const ExprPtr& e, const Scope& scope) { return e ? resolve(e, scope) : nullptr; }

}  // namespace

bool PathFormula::operator==(const PathFormula& o) const {
  return op == o.op && expr_equal(left, o.left) && expr_equal(right, o.right) && expr_equal(bound, o.bound);
}

bool RewardFormula::operator==(const RewardFormula& o) const {
  return op == o.op && expr_equal(bound, o.bound) && expr_equal(target, o.target);
}

bool GameFormula::operator==(const GameFormula& o) const {
  return coalitions == o.coalitions && equilibrium == o.equilibrium && kind == o.kind &&
         criterion == o.criterion && numeric == o.numeric &&
         (!numeric || direction == o.direction) &&
         (numeric || (comparison == o.comparison && expr_equal(threshold, o.threshold))) &&
         objectives == o.objectives;
}

Direction GameFormula::effective_direction() const {
  if (numeric) return direction;
  return comparison == Comparison::kGreater || comparison == Comparison::kGreaterEqual ? Direction::kMax
                                                                                         : Direction::kMin;
}

std::string print_game(const GameFormula& g) {
  std::string out = "<<";
  for (std::size_t c = 0; c < g.coalitions.size(); ++c) {
    if (c) out += ":";
    out += join(g.coalitions[c], ",");
  }
  out += ">>";
  if (!g.equilibrium) {
    const Objective& o = g.objectives[0];
    out += " " + print_objective_head(o) + print_query(g) + " " + print_objective_body(o);
    return out;
  }
  out += std::string("(") + (g.kind == EquilibriumKind::kNash ? "NE" : "CE") + "," +
         (g.criterion == Criterion::kSocialWelfare ? "SW" : "SF") + ")" + print_query(g) + " (";
  for (std::size_t k = 0; k < g.objectives.size(); ++k) {
    if (k) out += " + ";
    out += print_objective_head(g.objectives[k]) + print_objective_body(g.objectives[k]);
  }
  out += ")";
  return out;
}

std::shared_ptr<const GameFormula> resolve_game(const GameFormula& g, const Scope& scope) {
  auto out = std::make_shared<GameFormula>(g);
  out->threshold = resolve_opt(g.threshold, scope);
  for (auto& o : out->objectives) {
    o.path.left = resolve_opt(o.path.left, scope);
    o.path.right = resolve_opt(o.path.right, scope);
    o.path.bound = resolve_opt(o.path.bound, scope);
    o.rew.bound = resolve_opt(o.rew.bound, scope);
    o.rew.target = resolve_opt(o.rew.target, scope);
  }
  return out;
}

Property parse_property(std::string_view text) {
  TokenStream ts(tokenize(text));
  Property p;
  p.formula = state_formula(ts);
  if (!ts.at_end()) ts.fail("end of property");
  return p;
}

std::string print_property(const Property& p) { return print_expr(p.formula); }

std::vector<PropertyLine> split_property_file(std::string_view text) {
  std::vector<PropertyLine> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto cut = line.find("//");
    std::string_view body = trim(std::string_view(line).substr(0, cut));
    if (!body.empty()) out.push_back({no, std::string(body)});
  }
  return out;
}

Partition resolve_coalitions(const GameFormula& g, const Csg& game) {
  Partition out;
  for (const auto& members : g.coalitions) {
    std::vector<int> ids;
    for (const auto& m : members) {
      int id = game.find_player(m);
      if (id < 0 && !m.empty() && std::all_of(m.begin(), m.end(), ::isdigit)) {
        long long k = parse_integer(m);
        if (k >= 1 && k <= game.num_players()) id = static_cast<int>(k - 1);
      }
      if (id < 0) throw InputError("unknown player '" + m + "' in coalition");
      ids.push_back(id);
    }
    out.push_back(std::move(ids));
  }
  return out;
}

std::vector<std::string> typecheck(const Property& p, const Csg& game) {
  std::vector<std::string> diags;
  if (!p.formula) return {"empty property"};
  if (game_depth(*p.formula) > 2) diags.push_back("unsupported nesting depth (game operators nest at most two deep)");
  visit(
      *p.formula,
      [&](const Expr& e, bool root) {
        if (e.kind == ExprKind::kLabel && game.find_label(e.name) < 0) {
          diags.push_back("unknown label \"" + e.name + "\"");
        }
        if (e.kind != ExprKind::kGame) return;
        const GameFormula& g = *e.game;
        if (g.numeric && !root) diags.push_back("numeric query '" + print_game(g) + "' must be the whole property");
        std::set<int> seen;
        for (const auto& members : g.coalitions) {
          if (members.empty()) diags.push_back("empty coalition");
          for (const auto& m : members) {
            int id = game.find_player(m);
            if (id < 0 && !m.empty() && std::all_of(m.begin(), m.end(), ::isdigit)) {
              long long k = std::stoll(m);
              if (k >= 1 && k <= game.num_players()) id = static_cast<int>(k - 1);
            }
            if (id < 0) {
              diags.push_back("unknown player '" + m + "'");
            } else if (!seen.insert(id).second) {
              diags.push_back("coalitions must be disjoint: player '" + m + "' appears twice");
            }
          }
        }
        if (g.equilibrium && g.objectives.size() != g.coalitions.size()) {
          diags.push_back("equilibrium query has " + std::to_string(g.objectives.size()) + " objectives for " +
                          std::to_string(g.coalitions.size()) + " coalitions");
        }
        for (const auto& o : g.objectives) {
          if (o.is_reward != g.objectives[0].is_reward) {
            diags.push_back("objectives of one query must all be P or all be R");
            break;
          }
        }
        for (const auto& o : g.objectives) {
          if (!o.is_reward) continue;
          if (o.reward.empty() ? game.rewards.empty() : game.find_reward(o.reward) < 0) {
            diags.push_back("unknown reward structure \"" + o.reward + "\"");
          }
        }
        if (g.threshold && is_constant(*g.threshold) && g.threshold->kind == ExprKind::kLiteral &&
            !g.objectives.empty() && !g.objectives[0].is_reward && !g.equilibrium) {
          double q = g.threshold->literal.as_double();
          if (q < 0.0 || q > 1.0) diags.push_back("probability bound outside [0,1]");
        }
      },
      true);
  return diags;
}

Property resolve_property(const Property& p, const Scope& scope) {
  Scope s = scope;
  s.allow_labels = true;
  return {resolve(p.formula, s)};
}

}  // namespace csg
