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

#include "csgcheck/model.hpp"
#include "csgcheck/text_util.hpp"

namespace csg {
namespace {

std::string actions(const std::vector<std::string>& a) { return "[" + join(a, ",") + "]"; }

}  // namespace

std::string print_model(const ModelAst& ast) {
  std::string out = "csg\n\n";
  for (const auto& c : ast.constants) {
    out += "const " + type_name(c.type) + " " + c.name;
    if (c.value) out += " = " + print_expr(c.value);
    out += ";\n";
  }
  for (const auto& f : ast.formulas) out += "formula " + f.name + " = " + print_expr(f.body) + ";\n";
  for (const auto& p : ast.players) {
    std::vector<std::string> items = p.modules;
    for (const auto& a : p.actions) items.push_back("[" + a + "]");
    out += "\nplayer " + p.name + "\n  " + join(items, ", ") + "\nendplayer\n";
  }
  for (const auto& m : ast.modules) {
    out += "\nmodule " + m.name + "\n";
    for (const auto& v : m.variables) {
      out += "  " + v.name + " : ";
      out += v.is_bool ? "bool" : "[" + print_expr(v.low) + ".." + print_expr(v.high) + "]";
      if (v.init) out += " init " + print_expr(v.init);
      out += ";\n";
    }
    if (!m.variables.empty() && !m.commands.empty()) out += "\n";
    for (const auto& c : m.commands) {
      out += "  " + actions(c.actions) + " " + print_expr(c.guard) + " -> ";
      for (std::size_t k = 0; k < c.updates.size(); ++k) {
        const Update& u = c.updates[k];
        if (k) out += " + ";
        if (u.prob) out += print_expr(u.prob) + " : ";
        if (u.assignments.empty()) {
          out += "true";
          continue;
        }
        for (std::size_t j = 0; j < u.assignments.size(); ++j) {
          if (j) out += " & ";
          out += "(" + u.assignments[j].variable + "'=" + print_expr(u.assignments[j].value) + ")";
        }
      }
      out += ";\n";
    }
    out += "endmodule\n";
  }
  for (const auto& r : ast.rewards) {
    out += "\nrewards \"" + r.name + "\"\n";
    for (const auto& item : r.items) {
      out += "  ";
      if (item.on_action) out += actions(item.actions) + " ";
      out += print_expr(item.guard) + " : " + print_expr(item.value) + ";\n";
    }
    out += "endrewards\n";
  }
  if (!ast.labels.empty()) out += "\n";
  for (const auto& l : ast.labels) out += "label \"" + l.name + "\" = " + print_expr(l.body) + ";\n";
  return out;
}

}  // namespace csg
