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

enum class TokenKind { kIdentifier, kInteger, kReal, kString, kSymbol, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // identifier, symbol, unquoted string, or literal spelling
  int line = 1;
  int column = 1;
};

// Splits model or property text into tokens. Skips whitespace and `//`
// comments. A few Unicode operators are folded to their ASCII spelling
// (e.g. U+27E8 U+27E8 to "<<", U+2264 to "<=", U+00AC to "!").
std::vector<Token> tokenize(std::string_view text);

std::string describe(const Token& token);

// Cursor over a token vector with positioned error reporting.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(int ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::kEnd; }

  bool is_symbol(std::string_view s, int ahead = 0) const;
  bool is_keyword(std::string_view s, int ahead = 0) const;
  bool accept_symbol(std::string_view s);
  bool accept_keyword(std::string_view s);
  const Token& expect_symbol(std::string_view s);
  const Token& expect_keyword(std::string_view s);
  std::string expect_identifier(const char* what = "identifier");
  std::string expect_string();

  [[noreturn]] void fail(const std::string& expected) const;
  [[noreturn]] void fail_at(const Token& at, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace csg
