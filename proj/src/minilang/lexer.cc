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

#include "evotest/minilang/lexer.h"

#include <cctype>
#include <limits>

#include "evotest/minilang/parser.h"

namespace evotest::minilang {

std::string_view TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kFn:
      return "'fn'";
    case TokenKind::kTest:
      return "'test'";
    case TokenKind::kLet:
      return "'let'";
    case TokenKind::kIf:
      return "'if'";
    case TokenKind::kElse:
      return "'else'";
    case TokenKind::kWhile:
      return "'while'";
    case TokenKind::kReturn:
      return "'return'";
    case TokenKind::kTrue:
      return "'true'";
    case TokenKind::kFalse:
      return "'false'";
    case TokenKind::kIdent:
      return "identifier";
    case TokenKind::kInt:
      return "integer literal";
    case TokenKind::kString:
      return "string literal";
    case TokenKind::kLParen:
      return "'('";
    case TokenKind::kRParen:
      return "')'";
    case TokenKind::kLBrace:
      return "'{'";
    case TokenKind::kRBrace:
      return "'}'";
    case TokenKind::kComma:
      return "','";
    case TokenKind::kSemicolon:
      return "';'";
    case TokenKind::kAssign:
      return "'='";
    case TokenKind::kPlus:
      return "'+'";
    case TokenKind::kMinus:
      return "'-'";
    case TokenKind::kStar:
      return "'*'";
    case TokenKind::kSlash:
      return "'/'";
    case TokenKind::kPercent:
      return "'%'";
    case TokenKind::kEq:
      return "'=='";
    case TokenKind::kNe:
      return "'!='";
    case TokenKind::kLt:
      return "'<'";
    case TokenKind::kLe:
      return "'<='";
    case TokenKind::kGt:
      return "'>'";
    case TokenKind::kGe:
      return "'>='";
    case TokenKind::kAndAnd:
      return "'&&'";
    case TokenKind::kOrOr:
      return "'||'";
    case TokenKind::kBang:
      return "'!'";
    case TokenKind::kEof:
      return "end of input";
  }
  return "?";
}

namespace {

class Lexer {
 public:
  Lexer(std::string_view source, const std::string& file)
      : src_(source), file_(file) {}

  std::vector<Token> Run() {
    std::vector<Token> tokens;
    while (true) {
      SkipTrivia();
      Token tok;
      tok.loc = {line_, col_};
      if (AtEnd()) {
        tok.kind = TokenKind::kEof;
        tokens.push_back(std::move(tok));
        return tokens;
      }
      const char c = Peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        LexWord(tok);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        LexInt(tok);
      } else if (c == '"') {
        LexString(tok);
      } else {
        LexPunct(tok);
      }
      tokens.push_back(std::move(tok));
    }
  }

 private:
  bool AtEnd() const { return pos_ >= src_.size(); }
  char Peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void Advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if (src_[pos_] != '\r') {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void Fail(SourceLoc loc, std::string detail) {
    throw ParseError(file_, loc.line, loc.column, {}, std::move(detail));
  }

  void SkipTrivia() {
    while (!AtEnd()) {
      const char c = Peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        Advance();
      } else if (c == '/' && Peek(1) == '/') {
        while (!AtEnd() && Peek() != '\n') Advance();
      } else if (c == '/' && Peek(1) == '*') {
        const SourceLoc start{line_, col_};
        Advance();
        Advance();
        while (!(Peek() == '*' && Peek(1) == '/')) {
          if (AtEnd()) Fail(start, "unterminated block comment");
          Advance();
        }
        Advance();
        Advance();
      } else {
        return;
      }
    }
  }

  void LexWord(Token& tok) {
    std::string word;
    while (!AtEnd() && (std::isalnum(static_cast<unsigned char>(Peek())) ||
                        Peek() == '_')) {
      word.push_back(Peek());
      Advance();
    }
    static const std::pair<std::string_view, TokenKind> kKeywords[] = {
        {"fn", TokenKind::kFn},         {"test", TokenKind::kTest},
        {"let", TokenKind::kLet},       {"if", TokenKind::kIf},
        {"else", TokenKind::kElse},     {"while", TokenKind::kWhile},
        {"return", TokenKind::kReturn}, {"true", TokenKind::kTrue},
        {"false", TokenKind::kFalse},
    };
    tok.kind = TokenKind::kIdent;
    for (const auto& [text, kind] : kKeywords) {
      if (word == text) tok.kind = kind;
    }
    tok.text = std::move(word);
  }

  void LexInt(Token& tok) {
    const SourceLoc start = tok.loc;
    uint64_t value = 0;
    constexpr auto kMax =
        static_cast<uint64_t>(std::numeric_limits<int64_t>::max());
    while (!AtEnd() && std::isdigit(static_cast<unsigned char>(Peek()))) {
      value = value * 10 + static_cast<uint64_t>(Peek() - '0');
      if (value > kMax) Fail(start, "integer literal out of range");
      Advance();
    }
    if (!AtEnd() && (std::isalpha(static_cast<unsigned char>(Peek())) ||
                     Peek() == '_')) {
      Fail({line_, col_}, "malformed integer literal");
    }
    tok.kind = TokenKind::kInt;
    tok.int_value = static_cast<int64_t>(value);
  }

  void LexString(Token& tok) {
    const SourceLoc start = tok.loc;
    Advance();  // opening quote
    std::string value;
    while (true) {
      if (AtEnd() || Peek() == '\n') Fail(start, "unterminated string literal");
      const char c = Peek();
      if (c == '"') {
        Advance();
        break;
      }
      if (c == '\\') {
        Advance();
        switch (Peek()) {
          case 'n':
            value.push_back('\n');
            break;
          case 't':
            value.push_back('\t');
            break;
          case '\\':
            value.push_back('\\');
            break;
          case '"':
            value.push_back('"');
            break;
          default:
            Fail({line_, col_}, "unknown escape sequence");
        }
        Advance();
        continue;
      }
      value.push_back(c);
      Advance();
    }
    tok.kind = TokenKind::kString;
    tok.text = std::move(value);
  }

  void LexPunct(Token& tok) {
    const char c = Peek();
    const char n = Peek(1);
    auto one = [&](TokenKind kind) {
      tok.kind = kind;
      Advance();
    };
    auto two = [&](TokenKind kind) {
      tok.kind = kind;
      Advance();
      Advance();
    };
    switch (c) {
      case '(':
        return one(TokenKind::kLParen);
      case ')':
        return one(TokenKind::kRParen);
      case '{':
        return one(TokenKind::kLBrace);
      case '}':
        return one(TokenKind::kRBrace);
      case ',':
        return one(TokenKind::kComma);
      case ';':
        return one(TokenKind::kSemicolon);
      case '+':
        return one(TokenKind::kPlus);
      case '-':
        return one(TokenKind::kMinus);
      case '*':
        return one(TokenKind::kStar);
      case '/':
        return one(TokenKind::kSlash);
      case '%':
        return one(TokenKind::kPercent);
      case '=':
        return n == '=' ? two(TokenKind::kEq) : one(TokenKind::kAssign);
      case '!':
        return n == '=' ? two(TokenKind::kNe) : one(TokenKind::kBang);
      case '<':
        return n == '=' ? two(TokenKind::kLe) : one(TokenKind::kLt);
      case '>':
        return n == '=' ? two(TokenKind::kGe) : one(TokenKind::kGt);
      case '&':
        if (n == '&') return two(TokenKind::kAndAnd);
        break;
      case '|':
        if (n == '|') return two(TokenKind::kOrOr);
        break;
      default:
        break;
    }
    Fail(tok.loc, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  const std::string& file_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> Tokenize(std::string_view source, const std::string& file) {
  return Lexer(source, file).Run();
}

}  // namespace evotest::minilang
