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
#include <string_view>
#include <vector>

namespace csg {

// Shortest decimal form that parses back to the same double.
std::string format_number(double value);
// "%.17g" rendering; used where files promise 17 significant digits.
std::string format_number17(double value);

std::string_view trim(std::string_view text);
std::vector<std::string> split_whitespace(std::string_view text);
// Splits on `sep`, trimming each field.
std::vector<std::string> split(std::string_view text, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Strict numeric parsing of a whole (trimmed) field; throws InputError.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace csg
