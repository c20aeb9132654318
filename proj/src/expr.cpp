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

#include "csgcheck/expr.hpp"

#include <cmath>
#include <set>

#include "csgcheck/error.hpp"
#include "csgcheck/property.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {
namespace {

constexpr int kPrecIte = 1, kPrecIff = 2, kPrecImplies = 3, kPrecOr = 4, kPrecAnd = 5, kPrecNot = 6,
              kPrecRel = 7, kPrecAdd = 8, kPrecMul = 9, kPrecNeg = 10, kPrecAtom = 11;

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kIte:
      return kPrecIte;
    case ExprKind::kUnary:
      return e.op == Op::kNot ? kPrecNot : kPrecNeg;
    case ExprKind::kBinary:
      switch (e.op) {
        case Op::kIff:
          return kPrecIff;
        case Op::kImplies:
          return kPrecImplies;
        case Op::kOr:
          return kPrecOr;
        case Op::kAnd:
          return kPrecAnd;
        case Op::kAdd:
        case Op::kSub:
          return kPrecAdd;
        case Op::kMul:
        case Op::kDiv:
          return kPrecMul;
        default:
          return kPrecRel;
      }
    case ExprKind::kLiteral:
      // Negative literals only arise from folding; print them like negations.
      return (e.literal.type == Type::kInt && e.literal.i < 0) ||
                     (e.literal.type == Type::kDouble && std::signbit(e.literal.d))
                 ? kPrecNeg
                 : kPrecAtom;
    default:
      return kPrecAtom;
  }
}

const char* op_text(Op op) {
  switch (op) {
    case Op::kNeg: return "-";
    case Op::kNot: return "!";
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
    case Op::kDiv: return "/";
    case Op::kAnd: return "&";
    case Op::kOr: return "|";
    case Op::kImplies: return "=>";
    case Op::kIff: return "<=>";
    case Op::kEq: return "=";
    case Op::kNe: return "!=";
    case Op::kLt: return "<";
    case Op::kLe: return "<=";
    case Op::kGt: return ">";
    case Op::kGe: return ">=";
  }
  return "?";
}

bool is_function(const std::string& name) {
  return name == "min" || name == "max" || name == "floor" || name == "ceil" || name == "pow" || name == "mod";
}

// ---------------------------------------------------------------------------
// parsing

struct Parser {
  TokenStream& ts;
  PrimaryHook hook;

  ExprPtr ite() {
    ExprPtr c = iff();
    if (ts.is_symbol("?")) {
      const Token& t = ts.next();
      ExprPtr a = ite();
      ts.expect_symbol(":");
      ExprPtr b = ite();
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::kIte;
      e->args = {c, a, b};
      e->line = t.line;
      e->column = t.column;
      return e;
    }
    return c;
  }
  ExprPtr iff() {
    ExprPtr l = implies();
    while (ts.is_symbol("<=>")) {
      const Token& t = ts.next();
      l = make_binary(Op::kIff, l, implies(), t.line, t.column);
    }
    return l;
  }
  ExprPtr implies() {
    ExprPtr l = disj();
    if (ts.is_symbol("=>")) {
      const Token& t = ts.next();
      return make_binary(Op::kImplies, l, implies(), t.line, t.column);
    }
    return l;
  }
  ExprPtr disj() {
    ExprPtr l = conj();
    while (ts.is_symbol("|")) {
      const Token& t = ts.next();
      l = make_binary(Op::kOr, l, conj(), t.line, t.column);
    }
    return l;
  }
  ExprPtr conj() {
    ExprPtr l = negation();
    while (ts.is_symbol("&")) {
      const Token& t = ts.next();
      l = make_binary(Op::kAnd, l, negation(), t.line, t.column);
    }
    return l;
  }
  ExprPtr negation() {
    if (ts.is_symbol("!")) {
      const Token& t = ts.next();
      return make_unary(Op::kNot, negation(), t.line, t.column);
    }
    return relation();
  }
  ExprPtr relation() {
    ExprPtr l = sum();
    static const std::pair<const char*, Op> rel[] = {{"=", Op::kEq}, {"!=", Op::kNe}, {"<=", Op::kLe},
                                                     {">=", Op::kGe}, {"<", Op::kLt},  {">", Op::kGt}};
    for (const auto& [sym, op] : rel) {
      if (ts.is_symbol(sym)) {
        const Token& t = ts.next();
        return make_binary(op, l, sum(), t.line, t.column);
      }
    }
    return l;
  }
  ExprPtr sum() {
    ExprPtr l = product();
    while (ts.is_symbol("+") || ts.is_symbol("-")) {
      const Token& t = ts.next();
      l = make_binary(t.text == "+" ? Op::kAdd : Op::kSub, l, product(), t.line, t.column);
    }
    return l;
  }
  ExprPtr product() {
    ExprPtr l = unary();
    while (ts.is_symbol("*") || ts.is_symbol("/")) {
      const Token& t = ts.next();
      l = make_binary(t.text == "*" ? Op::kMul : Op::kDiv, l, unary(), t.line, t.column);
    }
    return l;
  }
  ExprPtr unary() {
    if (ts.is_symbol("-")) {
      const Token& t = ts.next();
      return make_unary(Op::kNeg, unary(), t.line, t.column);
    }
    return primary();
  }
  ExprPtr primary() {
    if (hook) {
      if (ExprPtr e = hook(ts)) return e;
    }
    const Token& t = ts.peek();
    switch (t.kind) {
      case TokenKind::kInteger: {
        ts.next();
        try {
          return make_literal(Value::of_int(parse_integer(t.text)), t.line, t.column);
        } catch (const InputError&) {
          ts.fail_at(t, "integer literal out of range");
        }
      }
      case TokenKind::kReal:
        ts.next();
        return make_literal(Value::of_double(parse_double(t.text)), t.line, t.column);
      case TokenKind::kString: {
        ts.next();
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::kLabel;
        e->name = t.text;
        e->type = Type::kBool;
        e->line = t.line;
        e->column = t.column;
        return e;
      }
      case TokenKind::kIdentifier: {
        if (t.text == "true" || t.text == "false") {
          ts.next();
          return make_literal(Value::of_bool(t.text == "true"), t.line, t.column);
        }
        if (is_function(t.text) && ts.is_symbol("(", 1)) {
          ts.next();
          ts.next();
          auto e = std::make_shared<Expr>();
          e->kind = ExprKind::kCall;
          e->name = t.text;
          e->line = t.line;
          e->column = t.column;
          if (!ts.is_symbol(")")) {
            do {
              e->args.push_back(ite());
            } while (ts.accept_symbol(","));
          }
          ts.expect_symbol(")");
          return e;
        }
        ts.next();
        return make_identifier(t.text, t.line, t.column);
      }
      case TokenKind::kSymbol:
        if (t.text == "(") {
          ts.next();
          ExprPtr e = ite();
          ts.expect_symbol(")");
          return e;
        }
        break;
      default:
        break;
    }
    ts.fail("expression");
  }
};

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out += "(";
  print(child, out);
  if (parens) out += ")";
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::kLiteral:
      out += format_value(e.literal);
      return;
    case ExprKind::kIdentifier:
    case ExprKind::kVariable:
      out += e.name;
      return;
    case ExprKind::kLabel:
      out += "\"" + e.name + "\"";
      return;
    case ExprKind::kGame:
      out += print_game(*e.game);
      return;
    case ExprKind::kUnary: {
      out += op_text(e.op);
      const Expr& a = *e.args[0];
      // "- -x" must not fuse into a token, and "-" before a negative literal
      // would read back differently.
      bool parens = precedence(a) < precedence(e) ||
                    (e.op == Op::kNeg && (a.kind == ExprKind::kUnary || a.kind == ExprKind::kLiteral) &&
                     precedence(a) == kPrecNeg);
      print_child(a, parens, out);
      return;
    }
    case ExprKind::kBinary: {
      int p = precedence(e);
      const Expr& l = *e.args[0];
      const Expr& r = *e.args[1];
      bool right_assoc = e.op == Op::kImplies;
      bool non_assoc = p == kPrecRel;
      bool lp = precedence(l) < p || (precedence(l) == p && (right_assoc || non_assoc));
      bool rp = precedence(r) < p || (precedence(r) == p && !right_assoc);
      print_child(l, lp, out);
      out += " ";
      out += op_text(e.op);
      out += " ";
      print_child(r, rp, out);
      return;
    }
    case ExprKind::kIte:
      print_child(*e.args[0], precedence(*e.args[0]) <= kPrecIte, out);
      out += " ? ";
      print_child(*e.args[1], false, out);
      out += " : ";
      print_child(*e.args[2], false, out);
      return;
    case ExprKind::kCall:
      out += e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print(*e.args[i], out);
      }
      out += ")";
      return;
  }
}

// ---------------------------------------------------------------------------
// evaluation

[[noreturn]] void eval_error(const Expr& e, const std::string& msg) {
  std::string where = e.line > 0 ? " (line " + std::to_string(e.line) + ")" : "";
  throw ElaborationError(msg + where);
}

std::int64_t checked(const Expr& e, std::int64_t a, std::int64_t b, Op op) {
  std::int64_t r = 0;
  bool overflow = false;
  switch (op) {
    case Op::kAdd: overflow = __builtin_add_overflow(a, b, &r); break;
    case Op::kSub: overflow = __builtin_sub_overflow(a, b, &r); break;
    case Op::kMul: overflow = __builtin_mul_overflow(a, b, &r); break;
    default: break;
  }
  if (overflow) eval_error(e, "integer overflow in '" + print_expr(e) + "'");
  return r;
}

Value eval(const Expr& e, std::span<const std::int64_t> state) {
  switch (e.kind) {
    case ExprKind::kLiteral:
      return e.literal;
    case ExprKind::kVariable:
      if (e.index < 0 || e.index >= static_cast<int>(state.size())) eval_error(e, "unbound variable " + e.name);
      return e.type == Type::kBool ? Value::of_bool(state[e.index] != 0) : Value::of_int(state[e.index]);
    case ExprKind::kIdentifier:
      eval_error(e, "unresolved identifier '" + e.name + "'");
    case ExprKind::kLabel:
    case ExprKind::kGame:
      eval_error(e, "labels and game operators cannot be evaluated here");
    case ExprKind::kUnary: {
      Value a = eval(*e.args[0], state);
      if (e.op == Op::kNot) return Value::of_bool(!a.as_bool());
      if (a.type == Type::kDouble) return Value::of_double(-a.d);
      if (a.i == INT64_MIN) eval_error(e, "integer overflow in negation");
      return Value::of_int(-a.i);
    }
    case ExprKind::kBinary: {
      if (e.op == Op::kAnd || e.op == Op::kOr || e.op == Op::kImplies) {
        bool l = eval(*e.args[0], state).as_bool();
        if (e.op == Op::kAnd && !l) return Value::of_bool(false);
        if (e.op == Op::kOr && l) return Value::of_bool(true);
        if (e.op == Op::kImplies && !l) return Value::of_bool(true);
        return Value::of_bool(eval(*e.args[1], state).as_bool());
      }
      Value a = eval(*e.args[0], state), b = eval(*e.args[1], state);
      bool real = a.type == Type::kDouble || b.type == Type::kDouble;
      switch (e.op) {
        case Op::kIff:
          return Value::of_bool(a.as_bool() == b.as_bool());
        case Op::kAdd:
        case Op::kSub:
        case Op::kMul:
          if (!real) return Value::of_int(checked(e, a.i, b.i, e.op));
          if (e.op == Op::kAdd) return Value::of_double(a.as_double() + b.as_double());
          if (e.op == Op::kSub) return Value::of_double(a.as_double() - b.as_double());
          return Value::of_double(a.as_double() * b.as_double());
        case Op::kDiv:
          if (b.as_double() == 0.0) eval_error(e, "division by zero");
          return Value::of_double(a.as_double() / b.as_double());
        case Op::kEq:
        case Op::kNe: {
          bool eq = real ? a.as_double() == b.as_double() : a.i == b.i;
          return Value::of_bool(e.op == Op::kEq ? eq : !eq);
        }
        case Op::kLt:
          return Value::of_bool(real ? a.as_double() < b.as_double() : a.i < b.i);
        case Op::kLe:
          return Value::of_bool(real ? a.as_double() <= b.as_double() : a.i <= b.i);
        case Op::kGt:
          return Value::of_bool(real ? a.as_double() > b.as_double() : a.i > b.i);
        case Op::kGe:
          return Value::of_bool(real ? a.as_double() >= b.as_double() : a.i >= b.i);
        default:
          break;
      }
      eval_error(e, "bad binary operator");
    }
    case ExprKind::kIte: {
      Value v = eval(*e.args[eval(*e.args[0], state).as_bool() ? 1 : 2], state);
      if (e.type == Type::kDouble && v.type == Type::kInt) return Value::of_double(static_cast<double>(v.i));
      return v;
    }
    case ExprKind::kCall: {
      std::vector<Value> a;
      for (const auto& arg : e.args) a.push_back(eval(*arg, state));
      if (e.name == "min" || e.name == "max") {
        bool is_min = e.name == "min";
        Value best = a[0];
        for (std::size_t k = 1; k < a.size(); ++k) {
          bool take = is_min ? a[k].as_double() < best.as_double() : a[k].as_double() > best.as_double();
          if (e.type == Type::kInt && !is_min) take = a[k].i > best.i;
          if (e.type == Type::kInt && is_min) take = a[k].i < best.i;
          if (take) best = a[k];
        }
        if (e.type == Type::kDouble) return Value::of_double(best.as_double());
        return best;
      }
      if (e.name == "floor" || e.name == "ceil") {
        double x = a[0].as_double();
        double r = e.name == "floor" ? std::floor(x) : std::ceil(x);
        if (!(std::abs(r) < 9.2e18)) eval_error(e, "integer overflow in " + e.name);
        return Value::of_int(static_cast<std::int64_t>(r));
      }
      if (e.name == "pow") {
        if (e.type == Type::kInt) {
          if (a[1].i < 0) eval_error(e, "negative integer exponent");
          std::int64_t r = 1;
          for (std::int64_t k = 0; k < a[1].i; ++k) r = checked(e, r, a[0].i, Op::kMul);
          return Value::of_int(r);
        }
        return Value::of_double(std::pow(a[0].as_double(), a[1].as_double()));
      }
      if (e.name == "mod") {
        if (a[1].i == 0) eval_error(e, "modulo by zero");
        std::int64_t r = a[0].i % a[1].i;
        if (r < 0) r += std::abs(a[1].i);
        return Value::of_int(r);
      }
      eval_error(e, "unknown function " + e.name);
    }
  }
  eval_error(e, "bad expression");
}

// ---------------------------------------------------------------------------
// resolution

[[noreturn]] void type_error(const Expr& e, const std::string& msg) {
  std::string where = e.line > 0 ? std::to_string(e.line) + ":" + std::to_string(e.column) + ": " : "";
  throw ElaborationError(where + msg);
}

bool numeric(Type t) { return t != Type::kBool; }

ExprPtr resolve_rec(const ExprPtr& e, const Scope& scope, std::set<std::string>& active) {
  auto out = std::make_shared<Expr>(*e);
  switch (e->kind) {
    case ExprKind::kLiteral:
      out->type = e->literal.type;
      return out;
    case ExprKind::kVariable:
      return out;
    case ExprKind::kLabel:
      if (!scope.allow_labels) type_error(*e, "label \"" + e->name + "\" not allowed here");
      out->type = Type::kBool;
      return out;
    case ExprKind::kGame:
      if (!scope.allow_labels) type_error(*e, "game operator not allowed here");
      out->game = resolve_game(*e->game, scope);
      out->type = Type::kBool;
      return out;
    case ExprKind::kIdentifier: {
      if (auto it = scope.variables.find(e->name); it != scope.variables.end()) {
        out->kind = ExprKind::kVariable;
        out->index = it->second.first;
        out->type = it->second.second;
        return out;
      }
      if (auto it = scope.constants.find(e->name); it != scope.constants.end()) {
        return make_literal(it->second, e->line, e->column);
      }
      if (auto it = scope.formulas.find(e->name); it != scope.formulas.end()) {
        if (!active.insert(e->name).second) type_error(*e, "formula '" + e->name + "' is recursive");
        ExprPtr body = resolve_rec(it->second, scope, active);
        active.erase(e->name);
        return body;
      }
      type_error(*e, "unknown identifier '" + e->name + "'");
    }
    default:
      break;
  }
  bool all_literal = true;
  for (auto& a : out->args) {
    a = resolve_rec(a, scope, active);
    all_literal = all_literal && a->kind == ExprKind::kLiteral;
  }
  const auto& args = out->args;
  auto need = [&](bool ok, const char* msg) {
    if (!ok) type_error(*e, std::string(msg) + " in '" + print_expr(*e) + "'");
  };
  switch (e->kind) {
    case ExprKind::kUnary:
      if (e->op == Op::kNot) {
        need(args[0]->type == Type::kBool, "'!' needs a boolean operand");
        out->type = Type::kBool;
      } else {
        need(numeric(args[0]->type), "'-' needs a numeric operand");
        out->type = args[0]->type;
      }
      break;
    case ExprKind::kBinary: {
      Type a = args[0]->type, b = args[1]->type;
      switch (e->op) {
        case Op::kAnd:
        case Op::kOr:
        case Op::kImplies:
        case Op::kIff:
          need(a == Type::kBool && b == Type::kBool, "boolean operator applied to numbers");
          out->type = Type::kBool;
          break;
        case Op::kAdd:
        case Op::kSub:
        case Op::kMul:
          need(numeric(a) && numeric(b), "arithmetic on booleans");
          out->type = a == Type::kInt && b == Type::kInt ? Type::kInt : Type::kDouble;
          break;
        case Op::kDiv:
          need(numeric(a) && numeric(b), "arithmetic on booleans");
          out->type = Type::kDouble;
          break;
        case Op::kEq:
        case Op::kNe:
          need(numeric(a) == numeric(b), "comparison of a boolean with a number");
          out->type = Type::kBool;
          break;
        default:
          need(numeric(a) && numeric(b), "ordering comparison on booleans");
          out->type = Type::kBool;
          break;
      }
      break;
    }
    case ExprKind::kIte: {
      need(args[0]->type == Type::kBool, "condition of '?' must be boolean");
      Type a = args[1]->type, b = args[2]->type;
      need(numeric(a) == numeric(b), "branches of '?' have incompatible types");
      out->type = a == b ? a : Type::kDouble;
      break;
    }
    case ExprKind::kCall: {
      const std::string& f = e->name;
      for (const auto& a : args) need(numeric(a->type), "function arguments must be numeric");
      bool all_int = true;
      for (const auto& a : args) all_int = all_int && a->type == Type::kInt;
      if (f == "min" || f == "max") {
        need(!args.empty(), "min/max need arguments");
        out->type = all_int ? Type::kInt : Type::kDouble;
      } else if (f == "floor" || f == "ceil") {
        need(args.size() == 1, "floor/ceil take one argument");
        out->type = Type::kInt;
      } else if (f == "pow") {
        need(args.size() == 2, "pow takes two arguments");
        out->type = all_int ? Type::kInt : Type::kDouble;
      } else {
        need(args.size() == 2 && all_int, "mod takes two integer arguments");
        out->type = Type::kInt;
      }
      break;
    }
    default:
      break;
  }
  if (all_literal) {
    Value v = eval(*out, {});
    auto lit = make_literal(v, e->line, e->column);
    return lit;
  }
  return out;
}

}  // namespace

std::string type_name(Type t) {
  switch (t) {
    case Type::kInt: return "int";
    case Type::kDouble: return "double";
    case Type::kBool: return "bool";
  }
  return "?";
}

bool Value::operator==(const Value& o) const {
  if (type != o.type) return false;
  return type == Type::kDouble ? d == o.d : i == o.i;
}

std::string format_value(const Value& v) {
  switch (v.type) {
    case Type::kBool:
      return v.i ? "true" : "false";
    case Type::kInt:
      return std::to_string(v.i);
    case Type::kDouble: {
      std::string s = format_number(v.d);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
  }
  return "?";
}

bool Expr::operator==(const Expr& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case ExprKind::kLiteral:
      return literal == o.literal;
    case ExprKind::kIdentifier:
    case ExprKind::kLabel:
      return name == o.name;
    case ExprKind::kVariable:
      return index == o.index;
    case ExprKind::kGame:
      return *game == *o.game;
    case ExprKind::kUnary:
    case ExprKind::kBinary:
      if (op != o.op) break;
      [[fallthrough]];
    case ExprKind::kIte:
    case ExprKind::kCall:
      if (name != o.name || args.size() != o.args.size()) return false;
      for (std::size_t k = 0; k < args.size(); ++k) {
        if (!expr_equal(args[k], o.args[k])) return false;
      }
      return true;
  }
  return false;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

ExprPtr make_literal(Value v, int line, int column) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kLiteral;
  e->literal = v;
  e->type = v.type;
  e->line = line;
  e->column = column;
  return e;
}

ExprPtr make_identifier(std::string name, int line, int column) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kIdentifier;
  e->name = std::move(name);
  e->line = line;
  e->column = column;
  return e;
}

ExprPtr make_unary(Op op, ExprPtr arg, int line, int column) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kUnary;
  e->op = op;
  e->args = {std::move(arg)};
  e->line = line;
  e->column = column;
  return e;
}

ExprPtr make_binary(Op op, ExprPtr lhs, ExprPtr rhs, int line, int column) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kBinary;
  e->op = op;
  e->args = {std::move(lhs), std::move(rhs)};
  e->line = line;
  e->column = column;
  return e;
}

ExprPtr parse_expression(TokenStream& ts, PrimaryHook hook) {
  Parser p{ts, hook};
  return p.ite();
}

std::string print_expr(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

ExprPtr resolve(const ExprPtr& e, const Scope& scope) {
  std::set<std::string> active;
  return resolve_rec(e, scope, active);
}

Value evaluate(const Expr& e, std::span<const std::int64_t> state) { return eval(e, state); }

Value evaluate_constant(const ExprPtr& e) { return eval(*e, {}); }

bool is_constant(const Expr& e) {
  if (e.kind == ExprKind::kVariable || e.kind == ExprKind::kLabel || e.kind == ExprKind::kGame ||
      e.kind == ExprKind::kIdentifier) {
    return false;
  }
  for (const auto& a : e.args) {
    if (!is_constant(*a)) return false;
  }
  return true;
}

}  // namespace csg
