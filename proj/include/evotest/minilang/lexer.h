// Copyright 2026 The Evotest Authors
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

#ifndef EVOTEST_MINILANG_LEXER_H_
#define EVOTEST_MINILANG_LEXER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/minilang/ast.h"

namespace evotest::minilang {

enum class TokenKind {
  kFn,
  kTest,
  kLet,
  kIf,
  kElse,
  kWhile,
  kReturn,
  kTrue,
  kFalse,
  kIdent,
  kInt,
  kString,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kComma,
  kSemicolon,
  kAssign,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kPercent,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kAndAnd,
  kOrOr,
  kBang,
  kEof,
};

std::string_view TokenKindName(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::kEof;
  std::string text;  // identifier name or decoded string contents
  int64_t int_value = 0;
  SourceLoc loc;
};

// Tokenizes the whole input. Comments (`//` and `/* */`) are dropped.
// Throws ParseError on malformed input.
std::vector<Token> Tokenize(std::string_view source, const std::string& file);

}  // namespace evotest::minilang

#endif  // EVOTEST_MINILANG_LEXER_H_
