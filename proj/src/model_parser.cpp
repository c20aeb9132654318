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

#include <set>

#include "csgcheck/error.hpp"
#include "csgcheck/model.hpp"

namespace csg {
namespace {

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) : ts_(tokenize(text)) {}

  ModelAst run() {
    ts_.accept_keyword("csg");
    while (!ts_.at_end()) {
      if (ts_.is_keyword("const")) {
        constant();
      } else if (ts_.is_keyword("formula")) {
        formula();
      } else if (ts_.is_keyword("player")) {
        player();
      } else if (ts_.is_keyword("module")) {
        module();
      } else if (ts_.is_keyword("rewards")) {
        rewards();
      } else if (ts_.is_keyword("label")) {
        label();
      } else {
        ts_.fail("'const', 'formula', 'player', 'module', 'rewards' or 'label'");
      }
    }
    return std::move(ast_);
  }

 private:
  // Identifiers share one namespace; labels and rewards have their own.
  void declare(const Token& at, const std::string& name, std::set<std::string>& space, const char* what) {
    if (!space.insert(name).second) ts_.fail_at(at, "duplicate " + std::string(what) + " '" + name + "'");
  }

  std::string declared_identifier(const char* what) {
    const Token& t = ts_.peek();
    std::string name = ts_.expect_identifier(what);
    declare(t, name, identifiers_, what);
    return name;
  }

  void constant() {
    const Token& kw = ts_.next();
    ConstDecl c;
    c.line = kw.line;
    if (ts_.accept_keyword("int")) {
      c.type = Type::kInt;
    } else if (ts_.accept_keyword("double")) {
      c.type = Type::kDouble;
    } else if (ts_.accept_keyword("bool")) {
      c.type = Type::kBool;
    }
    c.name = declared_identifier("constant name");
    if (ts_.accept_symbol("=")) c.value = parse_expression(ts_);
    ts_.expect_symbol(";");
    ast_.constants.push_back(std::move(c));
  }

  void formula() {
    ts_.next();
    FormulaDecl f;
    f.name = declared_identifier("formula name");
    ts_.expect_symbol("=");
    f.body = parse_expression(ts_);
    ts_.expect_symbol(";");
    ast_.formulas.push_back(std::move(f));
  }

  void player() {
    const Token& kw = ts_.next();
    PlayerDecl p;
    p.line = kw.line;
    p.name = declared_identifier("player name");
    do {
      if (ts_.accept_symbol("[")) {
        p.actions.push_back(ts_.expect_identifier("action name"));
        ts_.expect_symbol("]");
      } else {
        p.modules.push_back(ts_.expect_identifier("module name or [action]"));
      }
    } while (ts_.accept_symbol(","));
    ts_.expect_keyword("endplayer");
    ast_.players.push_back(std::move(p));
  }

  void module() {
    const Token& kw = ts_.next();
    ModuleDecl m;
    m.line = kw.line;
    m.name = declared_identifier("module name");
    // Variable declarations: `name :` ahead.
    while (ts_.peek().kind == TokenKind::kIdentifier && ts_.is_symbol(":", 1)) {
      const Token& at = ts_.peek();
      VarDecl v;
      v.line = at.line;
      v.name = declared_identifier("variable name");
      ts_.expect_symbol(":");
      if (ts_.accept_keyword("bool")) {
        v.is_bool = true;
      } else {
        ts_.expect_symbol("[");
        v.low = parse_expression(ts_);
        ts_.expect_symbol("..");
        v.high = parse_expression(ts_);
        ts_.expect_symbol("]");
      }
      if (ts_.accept_keyword("init")) v.init = parse_expression(ts_);
      ts_.expect_symbol(";");
      m.variables.push_back(std::move(v));
    }
    while (!ts_.is_keyword("endmodule")) {
      if (ts_.at_end()) ts_.fail("'endmodule'");
      m.commands.push_back(command());
    }
    ts_.next();
    ast_.modules.push_back(std::move(m));
  }

  std::vector<std::string> action_list() {
    std::vector<std::string> out;
    ts_.expect_symbol("[");
    if (!ts_.is_symbol("]")) {
      do {
        out.push_back(ts_.expect_identifier("action name"));
      } while (ts_.accept_symbol(","));
    }
    ts_.expect_symbol("]");
    return out;
  }

  Command command() {
    const Token& at = ts_.peek();
    if (!ts_.is_symbol("[")) ts_.fail("command, variable declaration or 'endmodule'");
    Command c;
    c.line = at.line;
    c.column = at.column;
    c.actions = action_list();
    c.guard = parse_expression(ts_);
    ts_.expect_symbol("->");
    do {
      c.updates.push_back(update());
    } while (ts_.accept_symbol("+"));
    ts_.expect_symbol(";");
    return c;
  }

  bool at_assignments() const {
    if (ts_.is_keyword("true") && (ts_.is_symbol(";", 1) || ts_.is_symbol("+", 1))) return true;
    return ts_.is_symbol("(") && ts_.peek(1).kind == TokenKind::kIdentifier && ts_.is_symbol("'", 2);
  }

  Update update() {
    Update u;
    if (!at_assignments()) {
      u.prob = parse_expression(ts_);
      ts_.expect_symbol(":");
    }
    if (ts_.accept_keyword("true")) return u;
    do {
      ts_.expect_symbol("(");
      Assignment a;
      a.variable = ts_.expect_identifier("variable name");
      ts_.expect_symbol("'");
      ts_.expect_symbol("=");
      a.value = parse_expression(ts_);
      ts_.expect_symbol(")");
      u.assignments.push_back(std::move(a));
    } while (ts_.accept_symbol("&"));
    return u;
  }

  void rewards() {
    ts_.next();
    RewardDecl r;
    const Token& at = ts_.peek();
    r.name = ts_.expect_string();
    declare(at, r.name, reward_names_, "reward structure");
    while (!ts_.accept_keyword("endrewards")) {
      if (ts_.at_end()) ts_.fail("'endrewards'");
      RewardItem item;
      if (ts_.is_symbol("[")) {
        item.on_action = true;
        item.actions = action_list();
      }
      item.guard = parse_expression(ts_);
      ts_.expect_symbol(":");
      item.value = parse_expression(ts_);
      ts_.expect_symbol(";");
      r.items.push_back(std::move(item));
    }
    ast_.rewards.push_back(std::move(r));
  }

  void label() {
    ts_.next();
    LabelDecl l;
    const Token& at = ts_.peek();
    l.name = ts_.expect_string();
    declare(at, l.name, label_names_, "label");
    ts_.expect_symbol("=");
    l.body = parse_expression(ts_);
    ts_.expect_symbol(";");
    ast_.labels.push_back(std::move(l));
  }

  TokenStream ts_;
  ModelAst ast_;
  std::set<std::string> identifiers_, reward_names_, label_names_;
};

}  // namespace

ModelAst parse_model(std::string_view text) { return ModelParser(text).run(); }

}  // namespace csg
