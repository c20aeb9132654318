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

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "csgcheck/lexer.hpp"

namespace csg {

enum class Type { kInt, kDouble, kBool };

std::string type_name(Type t);

struct Value {
  Type type = Type::kInt;
  std::int64_t i = 0;  // int payload, or 0/1 for bool
  double d = 0.0;

  static Value of_int(std::int64_t v) { return {Type::kInt, v, 0.0}; }
  static Value of_double(double v) { return {Type::kDouble, 0, v}; }
  static Value of_bool(bool v) { return {Type::kBool, v ? 1 : 0, 0.0}; }

  double as_double() const { return type == Type::kDouble ? d : static_cast<double>(i); }
  bool as_bool() const { return i != 0; }
  bool operator==(const Value& o) const;
};

std::string format_value(const Value& v);

enum class ExprKind {
  kLiteral,
  kIdentifier,  // unresolved name
  kVariable,    // resolved state variable (index)
  kLabel,       // "name" (properties only)
  kGame,        // game operator (properties only)
  kUnary,
  kBinary,
  kIte,
  kCall,
};

enum class Op {
  kNeg, kNot,
  kAdd, kSub, kMul, kDiv,
  kAnd, kOr, kImplies, kIff,
  kEq, kNe, kLt, kLe, kGt, kGe,
};

struct GameFormula;
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  Value literal;
  std::string name;  // identifier, label, variable or function name
  int index = -1;    // variable index after resolution
  Op op = Op::kAdd;
  std::vector<ExprPtr> args;
  std::shared_ptr<const GameFormula> game;
  Type type = Type::kInt;  // meaningful after resolution
  int line = 0;
  int column = 0;

  // Structural equality; ignores source positions and inferred types.
  bool operator==(const Expr& other) const;
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

ExprPtr make_literal(Value v, int line = 0, int column = 0);
ExprPtr make_identifier(std::string name, int line = 0, int column = 0);
ExprPtr make_unary(Op op, ExprPtr arg, int line = 0, int column = 0);
ExprPtr make_binary(Op op, ExprPtr lhs, ExprPtr rhs, int line = 0, int column = 0);

// Hook for property-only primaries; returns nullptr if it does not apply.
using PrimaryHook = ExprPtr (*)(TokenStream&);

// Conventional precedence, loosest first: ?:, <=>, => (right), |, &, !,
// relational, + -, * /, unary minus.
ExprPtr parse_expression(TokenStream& ts, PrimaryHook hook = nullptr);

std::string print_expr(const Expr& e);
inline std::string print_expr(const ExprPtr& e) { return print_expr(*e); }

// Names visible while resolving an expression.
struct Scope {
  std::map<std::string, Value> constants;
  std::map<std::string, ExprPtr> formulas;  // unresolved bodies
  std::map<std::string, std::pair<int, Type>> variables;
  bool allow_labels = false;
};

// Replaces identifiers by constants, inlined formulas or variable slots,
// infers types and folds constant subtrees. Throws ElaborationError on
// unknown names, type errors, or recursive formulas.
ExprPtr resolve(const ExprPtr& e, const Scope& scope);

// Evaluates a resolved expression over a state valuation. Labels and game
// operators are rejected. Integer overflow throws ElaborationError.
Value evaluate(const Expr& e, std::span<const std::int64_t> state);

// Evaluates a closed resolved expression (no variables).
Value evaluate_constant(const ExprPtr& e);

bool is_constant(const Expr& e);

}  // namespace csg
