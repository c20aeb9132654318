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

#include "csgcheck/lexer.hpp"

#include <cctype>

#include "csgcheck/error.hpp"

namespace csg {
namespace {

struct Alias {
  std::string_view utf8;
  std::string_view ascii;
};

constexpr Alias kAliases[] = {
    {"\u27E8\u27E8", "<<"}, {"\u27E9\u27E9", ">>"}, {"\u27EA", "<<"}, {"\u27EB", ">>"},
    {"\u2264", "<="}, {"\u2265", ">="}, {"\u2260", "!="}, {"\u00AC", "!"},
    {"\u2227", "&"},  {"\u2228", "|"},  {"\u21D2", "=>"}, {"\u21D4", "<=>"},
    {"\u2192", "->"}, {"\u2032", "'"},
};

// Longest first.
constexpr std::string_view kSymbols[] = {
    "<=>", "..", "<<", ">>", "<=", ">=", "!=", "=>", "->", "=?", "[", "]", "(", ")", "{", "}",
    ",",   ";",  ":",  "'",  "=",  "<",  ">",  "+",  "-",  "*", "/", "&", "|", "!", "?",
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      tok.kind = TokenKind::kIdentifier;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      bool real = false;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      // ".." is the range operator, not a decimal point.
      if (j < text.size() && text[j] == '.' && text.substr(j, 2) != "..") {
        real = true;
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          real = true;
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      tok.kind = real ? TokenKind::kReal : TokenKind::kInteger;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') throw ParseError(line, col, "unterminated string");
      tok.kind = TokenKind::kString;
      tok.text = std::string(text.substr(i + 1, j - i - 1));
      advance(j - i + 1);
    } else {
      bool matched = false;
      for (const auto& alias : kAliases) {
        if (text.substr(i, alias.utf8.size()) == alias.utf8) {
          tok.kind = TokenKind::kSymbol;
          tok.text = std::string(alias.ascii);
          advance(alias.utf8.size());
          matched = true;
          break;
        }
      }
      if (!matched) {
        for (auto sym : kSymbols) {
          if (text.substr(i, sym.size()) == sym) {
            tok.kind = TokenKind::kSymbol;
            tok.text = std::string(sym);
            advance(sym.size());
            matched = true;
            break;
          }
        }
      }
      if (!matched) throw ParseError(line, col, "unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokenKind::kEnd;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::kEnd:
      return "end of input";
    case TokenKind::kString:
      return "\"" + t.text + "\"";
    default:
      return "'" + t.text + "'";
  }
}

const Token& TokenStream::peek(int ahead) const {
  std::size_t at = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[at];
}

const Token& TokenStream::next() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenStream::is_symbol(std::string_view s, int ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::kSymbol && t.text == s;
}

bool TokenStream::is_keyword(std::string_view s, int ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::kIdentifier && t.text == s;
}

bool TokenStream::accept_symbol(std::string_view s) {
  if (!is_symbol(s)) return false;
  next();
  return true;
}

bool TokenStream::accept_keyword(std::string_view s) {
  if (!is_keyword(s)) return false;
  next();
  return true;
}

const Token& TokenStream::expect_symbol(std::string_view s) {
  if (!is_symbol(s)) fail("'" + std::string(s) + "'");
  return next();
}

const Token& TokenStream::expect_keyword(std::string_view s) {
  if (!is_keyword(s)) fail("'" + std::string(s) + "'");
  return next();
}

std::string TokenStream::expect_identifier(const char* what) {
  if (peek().kind != TokenKind::kIdentifier) fail(what);
  return next().text;
}

std::string TokenStream::expect_string() {
  if (peek().kind != TokenKind::kString) fail("quoted name");
  return next().text;
}

void TokenStream::fail(const std::string& expected) const {
  const Token& t = peek();
  throw ParseError(t.line, t.column, "expected " + expected + ", found " + describe(t));
}

void TokenStream::fail_at(const Token& at, const std::string& message) const {
  throw ParseError(at.line, at.column, message);
}

}  // namespace csg
