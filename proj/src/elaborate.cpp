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

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "csgcheck/error.hpp"
#include "csgcheck/model.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {
namespace {

struct ResolvedUpdate {
  ExprPtr prob;
  std::vector<std::pair<int, ExprPtr>> assignments;
};

struct ResolvedCommand {
  const Command* source = nullptr;
  int module = 0;
  std::vector<std::pair<int, int>> label;  // (player, action)
  ExprPtr guard;
  std::vector<ResolvedUpdate> updates;
  std::vector<int> writes;
};

struct ResolvedRewardItem {
  bool on_action = false;
  std::vector<std::pair<int, int>> label;
  ExprPtr guard;
  ExprPtr value;
};

struct VarInfo {
  std::string name;
  bool is_bool = false;
  std::int64_t low = 0, high = 1;
};

class Elaborator {
 public:
  Elaborator(const ModelAst& ast, const ConstantBindings& bindings) : ast_(ast), bindings_(bindings) {}

  ElaboratedModel run() {
    constants();
    for (const auto& f : ast_.formulas) scope_.formulas[f.name] = f.body;
    variables();
    players();
    commands();
    explore();
    return {std::move(game_), std::move(scope_)};
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ElaborationError(msg); }

  void constants() {
    for (const auto& c : ast_.constants) {
      Value v;
      auto bound = bindings_.find(c.name);
      if (bound != bindings_.end()) {
        v = parse_constant_value(bound->second, c.type, c.name);
      } else if (c.value) {
        Scope s;
        s.constants = scope_.constants;
        v = evaluate_constant(resolve(c.value, s));
      } else {
        fail("constant '" + c.name + "' is undefined (bind it with --const " + c.name + "=...)");
      }
      if (c.type == Type::kDouble && v.type == Type::kInt) v = Value::of_double(static_cast<double>(v.i));
      if (v.type != c.type) {
        fail("constant '" + c.name + "' declared " + type_name(c.type) + " but has a " + type_name(v.type) + " value");
      }
      scope_.constants[c.name] = v;
    }
  }

  std::int64_t int_constant(const ExprPtr& e, const std::string& what) {
    Scope s;
    s.constants = scope_.constants;
    s.formulas = scope_.formulas;
    Value v = evaluate_constant(resolve(e, s));
    if (v.type != Type::kInt) fail(what + " must be an integer constant");
    return v.i;
  }

  void variables() {
    for (const auto& m : ast_.modules) {
      for (const auto& d : m.variables) {
        VarInfo v;
        v.name = d.name;
        v.is_bool = d.is_bool;
        std::int64_t init = 0;
        if (!d.is_bool) {
          v.low = int_constant(d.low, "lower bound of " + d.name);
          v.high = int_constant(d.high, "upper bound of " + d.name);
          if (v.low > v.high) fail("empty range for variable " + d.name);
          init = d.init ? int_constant(d.init, "initial value of " + d.name) : v.low;
        } else if (d.init) {
          Scope s;
          s.constants = scope_.constants;
          Value b = evaluate_constant(resolve(d.init, s));
          if (b.type != Type::kBool) fail("initial value of " + d.name + " must be boolean");
          init = b.i;
        }
        if (init < v.low || init > v.high) fail("initial value of " + d.name + " out of range");
        scope_.variables[d.name] = {static_cast<int>(vars_.size()), d.is_bool ? Type::kBool : Type::kInt};
        vars_.push_back(v);
        initial_.push_back(init);
      }
    }
  }

  void players() {
    if (ast_.players.empty()) fail("model declares no players");
    std::map<std::string, int> module_index;
    for (std::size_t m = 0; m < ast_.modules.size(); ++m) module_index[ast_.modules[m].name] = static_cast<int>(m);
    owner_.assign(ast_.modules.size(), -1);
    game_.player_names.clear();
    for (std::size_t p = 0; p < ast_.players.size(); ++p) {
      const auto& decl = ast_.players[p];
      game_.player_names.push_back(decl.name);
      game_.action_names.push_back({""});
      for (const auto& m : decl.modules) {
        auto it = module_index.find(m);
        if (it == module_index.end()) fail("player " + decl.name + " refers to unknown module " + m);
        if (owner_[it->second] >= 0) fail("module " + m + " belongs to two players");
        owner_[it->second] = static_cast<int>(p);
      }
    }
    auto own = [&](const std::string& action, int p) {
      auto [it, fresh] = action_owner_.emplace(action, std::make_pair(p, 0));
      if (!fresh) {
        if (it->second.first != p) {
          fail("action " + action + " belongs to both " + game_.player_names[it->second.first] + " and " +
               game_.player_names[p]);
        }
        return;
      }
      it->second.second = static_cast<int>(game_.action_names[p].size());
      game_.action_names[p].push_back(action);
    };
    for (std::size_t p = 0; p < ast_.players.size(); ++p) {
      const auto& decl = ast_.players[p];
      for (const auto& a : decl.actions) own(a, static_cast<int>(p));
      for (const auto& m : decl.modules) {
        for (const auto& c : ast_.modules[module_index[m]].commands) {
          if (!c.actions.empty()) own(c.actions.front(), static_cast<int>(p));
        }
      }
    }
  }

  std::vector<std::pair<int, int>> label_of(const std::vector<std::string>& actions, const std::string& where) {
    std::vector<std::pair<int, int>> out;
    std::set<int> players;
    for (const auto& a : actions) {
      auto it = action_owner_.find(a);
      if (it == action_owner_.end()) fail("action " + a + " (" + where + ") is not owned by any player");
      if (!players.insert(it->second.first).second) {
        fail("action list " + where + " names two actions of player " + game_.player_names[it->second.first]);
      }
      out.push_back(it->second);
    }
    return out;
  }

  void commands() {
    for (std::size_t m = 0; m < ast_.modules.size(); ++m) {
      for (const auto& c : ast_.modules[m].commands) {
        ResolvedCommand rc;
        rc.source = &c;
        rc.module = static_cast<int>(m);
        std::string where = "module " + ast_.modules[m].name + ", line " + std::to_string(c.line);
        rc.label = label_of(c.actions, where);
        rc.guard = resolve(c.guard, scope_);
        if (rc.guard->type != Type::kBool) fail("guard is not boolean (" + where + ")");
        std::set<int> writes;
        for (const auto& u : c.updates) {
          ResolvedUpdate ru;
          if (u.prob) {
            ru.prob = resolve(u.prob, scope_);
            if (ru.prob->type == Type::kBool) fail("probability is boolean (" + where + ")");
          }
          std::set<int> local;
          for (const auto& a : u.assignments) {
            auto it = scope_.variables.find(a.variable);
            if (it == scope_.variables.end()) fail("assignment to unknown variable " + a.variable + " (" + where + ")");
            int idx = it->second.first;
            if (!local.insert(idx).second) fail("variable " + a.variable + " assigned twice (" + where + ")");
            ExprPtr value = resolve(a.value, scope_);
            bool want_bool = vars_[idx].is_bool;
            if ((value->type == Type::kBool) != want_bool || value->type == Type::kDouble) {
              fail("assignment to " + a.variable + " has type " + type_name(value->type) + " (" + where + ")");
            }
            ru.assignments.emplace_back(idx, value);
            writes.insert(idx);
          }
          rc.updates.push_back(std::move(ru));
        }
        rc.writes.assign(writes.begin(), writes.end());
        commands_.push_back(std::move(rc));
      }
    }
    for (const auto& r : ast_.rewards) {
      std::vector<ResolvedRewardItem> items;
      for (const auto& item : r.items) {
        ResolvedRewardItem ri;
        ri.on_action = item.on_action;
        ri.label = label_of(item.actions, "rewards \"" + r.name + "\"");
        ri.guard = resolve(item.guard, scope_);
        ri.value = resolve(item.value, scope_);
        if (ri.guard->type != Type::kBool || ri.value->type == Type::kBool) {
          fail("ill-typed item in rewards \"" + r.name + "\"");
        }
        items.push_back(std::move(ri));
      }
      reward_items_.push_back(std::move(items));
    }
    for (const auto& l : ast_.labels) {
      ExprPtr body = resolve(l.body, scope_);
      if (body->type != Type::kBool) fail("label \"" + l.name + "\" is not boolean");
      labels_.push_back(body);
    }
  }

  std::string state_name(const std::vector<std::int64_t>& v) const {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      parts.push_back(vars_[i].name + "=" + (vars_[i].is_bool ? (v[i] ? "true" : "false") : std::to_string(v[i])));
    }
    return "(" + join(parts, ",") + ")";
  }

  static bool matches(const std::vector<std::pair<int, int>>& label, const std::vector<int>& joint) {
    for (const auto& [p, a] : label) {
      if (joint[p] != a) return false;
    }
    return true;
  }

  static bool holds(const ExprPtr& e, const std::vector<std::int64_t>& v) { return evaluate(*e, v).as_bool(); }

  int intern(const std::vector<std::int64_t>& v) {
    auto [it, fresh] = index_.emplace(v, static_cast<int>(states_.size()));
    if (fresh) {
      states_.push_back(v);
      queue_.push_back(it->second);
    }
    return it->second;
  }

  void explore() {
    const int n = static_cast<int>(ast_.players.size());
    for (const auto& r : ast_.rewards) game_.rewards.push_back({r.name, {}, {}});
    for (const auto& l : ast_.labels) game_.label_names.push_back(l.name);
    for (const auto& v : vars_) game_.variable_names.push_back(v.name);
    intern(initial_);
    game_.initial = 0;
    while (!queue_.empty()) {
      int s = queue_.front();
      queue_.pop_front();
      const std::vector<std::int64_t> val = states_[s];
      std::vector<char> enabled(commands_.size());
      for (std::size_t c = 0; c < commands_.size(); ++c) {
        try {
          enabled[c] = holds(commands_[c].guard, val);
        } catch (const ElaborationError& e) {
          fail(std::string(e.what()) + " in state " + state_name(val));
        }
      }
      std::vector<std::vector<int>> avail(n);
      for (std::size_t c = 0; c < commands_.size(); ++c) {
        if (!enabled[c]) continue;
        int owner = owner_[commands_[c].module];
        for (const auto& [p, a] : commands_[c].label) {
          if (owner < 0 || owner == p) avail[p].push_back(a);
        }
      }
      for (auto& a : avail) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        if (a.empty()) a.push_back(kIdle);
      }
      std::vector<Choice> choices;
      std::vector<std::vector<double>> action_rewards(reward_items_.size());
      std::vector<int> pos(n, 0), joint(n);
      while (true) {
        for (int p = 0; p < n; ++p) joint[p] = avail[p][pos[p]];
        auto succ = successors(val, enabled, joint);
        choices.push_back({joint, std::move(succ)});
        for (std::size_t r = 0; r < reward_items_.size(); ++r) {
          double total = 0.0;
          for (const auto& item : reward_items_[r]) {
            if (item.on_action && matches(item.label, joint) && holds(item.guard, val)) {
              total += evaluate(*item.value, val).as_double();
            }
          }
          if (!std::isfinite(total)) fail("non-finite action reward in state " + state_name(val));
          action_rewards[r].push_back(total);
        }
        int p = n - 1;
        while (p >= 0 && ++pos[p] == static_cast<int>(avail[p].size())) pos[p--] = 0;
        if (p < 0) break;
      }
      if (static_cast<int>(game_.choices.size()) <= s) {
        game_.choices.resize(s + 1);
        game_.available.resize(s + 1);
        for (auto& r : game_.rewards) {
          r.state_rewards.resize(s + 1);
          r.action_rewards.resize(s + 1);
        }
      }
      game_.choices[s] = std::move(choices);
      game_.available[s] = std::move(avail);
      for (std::size_t r = 0; r < reward_items_.size(); ++r) {
        double total = 0.0;
        for (const auto& item : reward_items_[r]) {
          if (!item.on_action && holds(item.guard, val)) total += evaluate(*item.value, val).as_double();
        }
        if (!std::isfinite(total)) fail("non-finite state reward in state " + state_name(val));
        game_.rewards[r].state_rewards[s] = total;
        game_.rewards[r].action_rewards[s] = std::move(action_rewards[r]);
      }
    }
    for (std::size_t s = 0; s < states_.size(); ++s) {
      game_.state_names.push_back(state_name(states_[s]));
      game_.valuations.push_back(states_[s]);
      std::vector<int> labels;
      for (std::size_t l = 0; l < labels_.size(); ++l) {
        if (holds(labels_[l], states_[s])) labels.push_back(static_cast<int>(l));
      }
      game_.state_labels.push_back(std::move(labels));
    }
    require_valid(game_);
  }

  std::vector<Successor> successors(const std::vector<std::int64_t>& val, const std::vector<char>& enabled,
                                    const std::vector<int>& joint) {
    std::vector<int> fired(ast_.modules.size(), -1);
    std::vector<int> writer(vars_.size(), -1);
    std::vector<std::pair<std::vector<std::int64_t>, double>> dist{{val, 1.0}};
    for (std::size_t c = 0; c < commands_.size(); ++c) {
      const auto& cmd = commands_[c];
      if (!enabled[c] || !matches(cmd.label, joint)) continue;
      const std::string where = "command at line " + std::to_string(cmd.source->line) + " in state " + state_name(val);
      if (fired[cmd.module] >= 0) {
        fail("module " + ast_.modules[cmd.module].name + " has two commands enabled for one joint action (lines " +
             std::to_string(commands_[fired[cmd.module]].source->line) + " and " +
             std::to_string(cmd.source->line) + ") in state " + state_name(val));
      }
      fired[cmd.module] = static_cast<int>(c);
      for (int w : cmd.writes) {
        if (writer[w] >= 0) {
          fail("variable " + vars_[w].name + " written by two commands (lines " +
               std::to_string(commands_[writer[w]].source->line) + " and " + std::to_string(cmd.source->line) +
               ") in state " + state_name(val));
        }
        writer[w] = static_cast<int>(c);
      }
      std::vector<double> probs;
      double total = 0.0;
      for (const auto& u : cmd.updates) {
        double p = u.prob ? evaluate(*u.prob, val).as_double() : 1.0;
        if (!(p >= 0.0 && p <= 1.0)) fail("probability " + format_number(p) + " outside [0,1] (" + where + ")");
        probs.push_back(p);
        total += p;
      }
      if (std::abs(total - 1.0) > kModelTolerance) {
        fail("probabilities sum to " + format_number(total) + " (" + where + ")");
      }
      std::vector<std::pair<std::vector<std::int64_t>, double>> next;
      for (const auto& [v, p] : dist) {
        for (std::size_t k = 0; k < cmd.updates.size(); ++k) {
          if (probs[k] == 0.0) continue;
          auto w = v;
          for (const auto& [idx, expr] : cmd.updates[k].assignments) {
            Value x = evaluate(*expr, val);
            if (x.i < vars_[idx].low || x.i > vars_[idx].high) {
              fail("value " + std::to_string(x.i) + " out of range for " + vars_[idx].name + " (" + where + ")");
            }
            w[idx] = x.i;
          }
          next.emplace_back(std::move(w), p * probs[k]);
        }
      }
      dist = std::move(next);
    }
    std::vector<Successor> out;
    for (const auto& [v, p] : dist) {
      int t = intern(v);
      auto it = std::find_if(out.begin(), out.end(), [&](const Successor& x) { return x.state == t; });
      if (it == out.end()) {
        out.push_back({t, p});
      } else {
        it->prob += p;
      }
    }
    return out;
  }

  const ModelAst& ast_;
  const ConstantBindings& bindings_;
  Scope scope_;
  std::vector<VarInfo> vars_;
  std::vector<std::int64_t> initial_;
  std::vector<int> owner_;
  std::map<std::string, std::pair<int, int>> action_owner_;
  std::vector<ResolvedCommand> commands_;
  std::vector<std::vector<ResolvedRewardItem>> reward_items_;
  std::vector<ExprPtr> labels_;
  Csg game_;
  std::map<std::vector<std::int64_t>, int> index_;
  std::vector<std::vector<std::int64_t>> states_;
  std::deque<int> queue_;
};

}  // namespace

Value parse_constant_value(const std::string& text, Type type, const std::string& name) {
  std::string_view t = trim(text);
  try {
    switch (type) {
      case Type::kBool:
        if (t == "true") return Value::of_bool(true);
        if (t == "false") return Value::of_bool(false);
        break;
      case Type::kInt:
        return Value::of_int(parse_integer(t));
      case Type::kDouble:
        return Value::of_double(parse_double(t));
    }
  } catch (const InputError&) {
  }
  throw InputError("bad value '" + text + "' for " + type_name(type) + " constant " + name);
}

ElaboratedModel elaborate(const ModelAst& ast, const ConstantBindings& bindings) {
  return Elaborator(ast, bindings).run();
}

}  // namespace csg
