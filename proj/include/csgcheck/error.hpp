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

#include <stdexcept>
#include <string>

namespace csg {

// Malformed user input: unknown names, bad partitions, schema violations.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error with a 1-based source position.
class ParseError : public InputError {
 public:
  ParseError(int line, int column, const std::string& message)
      : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " +
                   message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Raised while expanding a model into an explicit game.
class ElaborationError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical breakdown inside a solver.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public SolverError {
 public:
  NonConvergenceError(const std::string& message, double residual,
                      long iterations)
      : SolverError(message), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  long iterations() const { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

}  // namespace csg
