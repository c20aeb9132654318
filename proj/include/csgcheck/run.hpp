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
#include <iosfwd>
#include <string>
#include <vector>

#include "csgcheck/checker.hpp"
#include "csgcheck/model.hpp"

namespace csg {

enum class ExitCode { kOk = 0, kPropertyFalse = 1, kInputError = 2, kSolverError = 3 };

struct RunConfig {
  std::string model;
  std::string props;
  std::vector<std::string> inline_props;
  std::vector<std::string> constants;  // "name=value"
  double epsilon = 1e-6;
  long max_iters = 1000000;
  std::string export_strategy;
  std::string import_strategy;
  std::string format = "text";  // text | json | csv
  std::string sweep;            // name=lo:hi:step
  std::uint64_t seed = 1;
  long runs = 10000;
  int threads = 1;
  double certify_eps = 1e-4;
  std::string output;
  bool timing = false;
};

struct LoadedModel {
  Csg game;
  Scope scope;
};

// A .json path is read as an explicit game, anything else as a model.
LoadedModel load_model(const std::string& path, const ConstantBindings& bindings);
ConstantBindings parse_bindings(const std::vector<std::string>& items);

// Grid of "name=lo:hi:step", inclusive of hi up to round-off.
std::vector<std::string> sweep_values(const std::string& spec, std::string* name);

std::string csv_field(const std::string& text);

// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csg
