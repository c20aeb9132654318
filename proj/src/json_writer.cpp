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

#include "csgcheck/json_writer.hpp"

#include <cmath>

#include "csgcheck/text_util.hpp"

namespace csg {
namespace {

bool is_scalar(const ordered_json& v) { return !v.is_array() && !v.is_object(); }

void write_scalar(const ordered_json& v, std::string& out) {
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (std::isnan(d)) {
      out += "\"nan\"";
    } else if (std::isinf(d)) {
      out += d > 0 ? "\"inf\"" : "\"-inf\"";
    } else {
      out += format_number17(d);
    }
    return;
  }
  out += v.dump();
}

void write(const ordered_json& v, int indent, std::string& out) {
  const std::string pad(indent * 2, ' '), inner((indent + 1) * 2, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner + ordered_json(it.key()).dump() + ": ";
      write(it.value(), indent + 1, out);
    }
    out += "\n" + pad + "}";
  } else if (v.is_array()) {
    bool flat = true;
    for (const auto& e : v) flat = flat && is_scalar(e);
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        write_scalar(v[i], out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += inner;
      write(v[i], indent + 1, out);
    }
    out += "\n" + pad + "]";
  } else {
    write_scalar(v, out);
  }
}

}  // namespace

std::string write_json(const ordered_json& value) {
  std::string out;
  write(value, 0, out);
  out += '\n';
  return out;
}

}  // namespace csg
