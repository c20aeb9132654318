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

#include <string>

#include "json.hpp"

namespace csg {

using ordered_json = nlohmann::ordered_json;

// Pretty printer with fixed formatting: two-space indent, arrays of scalars
// on one line, floating-point numbers as "%.17g", non-finite numbers as the
// strings "inf", "-inf" and "nan". Output ends with a newline.
std::string write_json(const ordered_json& value);

}  // namespace csg
