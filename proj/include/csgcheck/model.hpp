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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "csgcheck/csg.hpp"
#include "csgcheck/expr.hpp"

namespace csg {

struct ConstDecl {
  std::string name;
  Type type = Type::kInt;
  ExprPtr value;  // null: must be bound from outside
  int line = 0;
  bool operator==(const ConstDecl& o) const {
    return name == o.name && type == o.type && expr_equal(value, o.value);
  }
};

struct FormulaDecl {
  std::string name;
  ExprPtr body;
  bool operator==(const FormulaDecl& o) const { return name == o.name && expr_equal(body, o.body); }
};

struct PlayerDecl {
  std::string name;
  std::vector<std::string> modules;
  std::vector<std::string> actions;
  int line = 0;
  bool operator==(const PlayerDecl& o) const {
    return name == o.name && modules == o.modules && actions == o.actions;
  }
};

struct VarDecl {
  std::string name;
  bool is_bool = false;
  ExprPtr low, high;  // integer range
  ExprPtr init;       // null: low (or false)
  int line = 0;
  bool operator==(const VarDecl& o) const {
    return name == o.name && is_bool == o.is_bool && expr_equal(low, o.low) && expr_equal(high, o.high) &&
           expr_equal(init, o.init);
  }
};

struct Assignment {
  std::string variable;
  ExprPtr value;
  bool operator==(const Assignment& o) const { return variable == o.variable && expr_equal(value, o.value); }
};

struct Update {
  ExprPtr prob;  // null: probability 1
  std::vector<Assignment> assignments;  // empty: "true"
  bool operator==(const Update& o) const { return expr_equal(prob, o.prob) && assignments == o.assignments; }
};

struct Command {
  std::vector<std::string> actions;  // empty: unlabelled, fires on every step
  ExprPtr guard;
  std::vector<Update> updates;
  int line = 0;
  int column = 0;
  bool operator==(const Command& o) const {
    return actions == o.actions && expr_equal(guard, o.guard) && updates == o.updates;
  }
};

struct ModuleDecl {
  std::string name;
  std::vector<VarDecl> variables;
  std::vector<Command> commands;
  int line = 0;
  bool operator==(const ModuleDecl& o) const {
    return name == o.name && variables == o.variables && commands == o.commands;
  }
};

struct RewardItem {
  bool on_action = false;  // "[a,...] guard : value" vs "guard : value"
  std::vector<std::string> actions;
  ExprPtr guard;
  ExprPtr value;
  bool operator==(const RewardItem& o) const {
    return on_action == o.on_action && actions == o.actions && expr_equal(guard, o.guard) &&
           expr_equal(value, o.value);
  }
};

struct RewardDecl {
  std::string name;
  std::vector<RewardItem> items;
  bool operator==(const RewardDecl&) const = default;
};

struct LabelDecl {
  std::string name;
  ExprPtr body;
  bool operator==(const LabelDecl& o) const { return name == o.name && expr_equal(body, o.body); }
};

struct ModelAst {
  std::vector<ConstDecl> constants;
  std::vector<FormulaDecl> formulas;
  std::vector<PlayerDecl> players;
  std::vector<ModuleDecl> modules;
  std::vector<RewardDecl> rewards;
  std::vector<LabelDecl> labels;
  bool operator==(const ModelAst&) const = default;
};

// Throws ParseError (positioned) on syntax errors and duplicate names.
ModelAst parse_model(std::string_view text);
std::string print_model(const ModelAst& ast);

// Name -> textual value, as given by `--const name=value`.
using ConstantBindings = std::map<std::string, std::string>;

struct ElaboratedModel {
  Csg game;
  Scope scope;  // evaluated constants, formulas and state variables
};

// Reachable-state exploration from the initial valuation. Bindings for
// names the model does not declare are ignored.
ElaboratedModel elaborate(const ModelAst& ast, const ConstantBindings& bindings = {});

// Parses a `--const` value as the declared type (ints widen to double).
Value parse_constant_value(const std::string& text, Type type, const std::string& name);

}  // namespace csg
