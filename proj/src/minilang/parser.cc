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

#include "evotest/minilang/parser.h"

#include <set>
#include <sstream>
#include <utility>

#include "evotest/minilang/lexer.h"

namespace evotest::minilang {

namespace {

std::string FormatParseMessage(const std::string& file, int line, int column,
                               const std::vector<std::string>& expected,
                               const std::string& detail) {
  std::ostringstream out;
  out << file << ":" << line << ":" << column << ": " << detail;
  if (!expected.empty()) {
    out << " (expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out << (i + 1 == expected.size() ? " or " : ", ");
      out << expected[i];
    }
    out << ")";
  }
  return out.str();
}

}  // namespace

ParseError::ParseError(std::string file, int line, int column,
                       std::vector<std::string> expected, std::string detail)
    : std::runtime_error(
          FormatParseMessage(file, line, column, expected, detail)),
      file_(std::move(file)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      detail_(std::move(detail)) {}

std::string ParseError::Trace() const {
  std::ostringstream out;
  out << "ERROR parse_error at " << file_ << ":" << line_ << ":" << column_
      << " in <toplevel>\n"
      << "  " << what();
  return out.str();
}

namespace {

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file, bool allow_tests)
      : tokens_(std::move(tokens)),
        file_(std::move(file)),
        allow_tests_(allow_tests) {}

  std::vector<FunctionDecl> ParseFunctions() {
    std::vector<FunctionDecl> functions;
    std::set<std::string> names;
    while (!Check(TokenKind::kEof)) {
      const Token& start = Current();
      FunctionDecl fn = ParseFunction();
      if (!names.insert(fn.name).second) {
        throw ParseError(file_, start.loc.line, start.loc.column, {},
                         "duplicate function '" + fn.name + "'");
      }
      functions.push_back(std::move(fn));
    }
    return functions;
  }

 private:
  const Token& Current() const { return tokens_[pos_]; }
  bool Check(TokenKind kind) const { return Current().kind == kind; }
  bool CheckNext(TokenKind kind) const {
    return pos_ + 1 < tokens_.size() && tokens_[pos_ + 1].kind == kind;
  }

  const Token& Advance() {
    const Token& tok = tokens_[pos_];
    if (tok.kind != TokenKind::kEof) ++pos_;
    return tok;
  }

  bool Match(TokenKind kind) {
    if (!Check(kind)) return false;
    Advance();
    return true;
  }

  [[noreturn]] void Fail(std::vector<TokenKind> expected) {
    std::vector<std::string> names;
    for (TokenKind kind : expected) {
      names.emplace_back(TokenKindName(kind));
    }
    const Token& tok = Current();
    std::string found(TokenKindName(tok.kind));
    if (tok.kind == TokenKind::kIdent) found = "identifier '" + tok.text + "'";
    throw ParseError(file_, tok.loc.line, tok.loc.column, std::move(names),
                     "unexpected " + found);
  }

  const Token& Expect(TokenKind kind) {
    if (!Check(kind)) Fail({kind});
    return Advance();
  }

  FunctionDecl ParseFunction() {
    FunctionDecl fn;
    fn.loc = Current().loc;
    if (Match(TokenKind::kTest)) {
      if (!allow_tests_) {
        throw ParseError(file_, fn.loc.line, fn.loc.column, {"'fn'"},
                         "test declarations are only allowed in test files");
      }
      fn.is_test = true;
    } else if (!Match(TokenKind::kFn)) {
      if (allow_tests_) Fail({TokenKind::kFn, TokenKind::kTest});
      Fail({TokenKind::kFn});
    }
    const Token& name = Expect(TokenKind::kIdent);
    if (IsBuiltin(name.text)) {
      throw ParseError(file_, name.loc.line, name.loc.column, {},
                       "cannot redefine built-in '" + name.text + "'");
    }
    fn.name = name.text;
    Expect(TokenKind::kLParen);
    if (!Check(TokenKind::kRParen)) {
      do {
        const Token& param = Expect(TokenKind::kIdent);
        for (const auto& existing : fn.params) {
          if (existing == param.text) {
            throw ParseError(file_, param.loc.line, param.loc.column, {},
                             "duplicate parameter '" + param.text + "'");
          }
        }
        fn.params.push_back(param.text);
      } while (Match(TokenKind::kComma));
    }
    Expect(TokenKind::kRParen);
    if (fn.is_test && !fn.params.empty()) {
      throw ParseError(file_, fn.loc.line, fn.loc.column, {"')'"},
                       "test methods take no parameters");
    }
    fn.body = ParseBlock();
    return fn;
  }

  std::vector<Stmt> ParseBlock() {
    Expect(TokenKind::kLBrace);
    std::vector<Stmt> block;
    while (!Check(TokenKind::kRBrace)) {
      if (Check(TokenKind::kEof)) Fail({TokenKind::kRBrace});
      block.push_back(ParseStatement());
    }
    Advance();
    return block;
  }

  Stmt ParseStatement() {
    Stmt stmt;
    stmt.loc = Current().loc;
    if (Match(TokenKind::kLet)) {
      stmt.kind = Stmt::Kind::kLet;
      stmt.name = Expect(TokenKind::kIdent).text;
      Expect(TokenKind::kAssign);
      stmt.expr = ParseExpr();
      Expect(TokenKind::kSemicolon);
    } else if (Match(TokenKind::kIf)) {
      ParseIfRest(stmt);
    } else if (Match(TokenKind::kWhile)) {
      stmt.kind = Stmt::Kind::kWhile;
      Expect(TokenKind::kLParen);
      stmt.expr = ParseExpr();
      Expect(TokenKind::kRParen);
      stmt.body = ParseBlock();
    } else if (Match(TokenKind::kReturn)) {
      stmt.kind = Stmt::Kind::kReturn;
      if (!Check(TokenKind::kSemicolon)) stmt.expr = ParseExpr();
      Expect(TokenKind::kSemicolon);
    } else if (Check(TokenKind::kIdent) && CheckNext(TokenKind::kAssign)) {
      stmt.kind = Stmt::Kind::kAssign;
      stmt.name = Advance().text;
      Advance();
      stmt.expr = ParseExpr();
      Expect(TokenKind::kSemicolon);
    } else if (StartsExpr()) {
      stmt.kind = Stmt::Kind::kExpr;
      stmt.expr = ParseExpr();
      Expect(TokenKind::kSemicolon);
    } else {
      Fail({TokenKind::kLet, TokenKind::kIf, TokenKind::kWhile,
            TokenKind::kReturn, TokenKind::kIdent, TokenKind::kRBrace});
    }
    return stmt;
  }

  // Called after consuming `if`.
  void ParseIfRest(Stmt& stmt) {
    stmt.kind = Stmt::Kind::kIf;
    Expect(TokenKind::kLParen);
    stmt.expr = ParseExpr();
    Expect(TokenKind::kRParen);
    stmt.body = ParseBlock();
    if (Match(TokenKind::kElse)) {
      stmt.has_else = true;
      if (Check(TokenKind::kIf)) {
        Stmt nested;
        nested.loc = Current().loc;
        Advance();
        ParseIfRest(nested);
        stmt.else_body.push_back(std::move(nested));
      } else {
        stmt.else_body = ParseBlock();
      }
    }
  }

  bool StartsExpr() const {
    switch (Current().kind) {
      case TokenKind::kIdent:
      case TokenKind::kInt:
      case TokenKind::kString:
      case TokenKind::kTrue:
      case TokenKind::kFalse:
      case TokenKind::kLParen:
      case TokenKind::kBang:
      case TokenKind::kMinus:
        return true;
      default:
        return false;
    }
  }

  Expr ParseExpr() { return ParseOr(); }

  Expr ParseOr() {
    Expr lhs = ParseAnd();
    while (Check(TokenKind::kOrOr)) {
      const SourceLoc loc = Advance().loc;
      lhs = Expr::Binary(BinaryOp::kOr, std::move(lhs), ParseAnd(), loc);
    }
    return lhs;
  }

  Expr ParseAnd() {
    Expr lhs = ParseEquality();
    while (Check(TokenKind::kAndAnd)) {
      const SourceLoc loc = Advance().loc;
      lhs = Expr::Binary(BinaryOp::kAnd, std::move(lhs), ParseEquality(), loc);
    }
    return lhs;
  }

  Expr ParseEquality() {
    Expr lhs = ParseRelational();
    while (Check(TokenKind::kEq) || Check(TokenKind::kNe)) {
      const Token& op = Advance();
      const BinaryOp bop =
          op.kind == TokenKind::kEq ? BinaryOp::kEq : BinaryOp::kNe;
      lhs = Expr::Binary(bop, std::move(lhs), ParseRelational(), op.loc);
    }
    return lhs;
  }

  Expr ParseRelational() {
    Expr lhs = ParseAdditive();
    while (true) {
      BinaryOp bop;
      if (Check(TokenKind::kLt)) {
        bop = BinaryOp::kLt;
      } else if (Check(TokenKind::kLe)) {
        bop = BinaryOp::kLe;
      } else if (Check(TokenKind::kGt)) {
        bop = BinaryOp::kGt;
      } else if (Check(TokenKind::kGe)) {
        bop = BinaryOp::kGe;
      } else {
        return lhs;
      }
      const SourceLoc loc = Advance().loc;
      lhs = Expr::Binary(bop, std::move(lhs), ParseAdditive(), loc);
    }
  }

  Expr ParseAdditive() {
    Expr lhs = ParseMultiplicative();
    while (Check(TokenKind::kPlus) || Check(TokenKind::kMinus)) {
      const Token& op = Advance();
      const BinaryOp bop =
          op.kind == TokenKind::kPlus ? BinaryOp::kAdd : BinaryOp::kSub;
      lhs = Expr::Binary(bop, std::move(lhs), ParseMultiplicative(), op.loc);
    }
    return lhs;
  }

  Expr ParseMultiplicative() {
    Expr lhs = ParseUnary();
    while (true) {
      BinaryOp bop;
      if (Check(TokenKind::kStar)) {
        bop = BinaryOp::kMul;
      } else if (Check(TokenKind::kSlash)) {
        bop = BinaryOp::kDiv;
      } else if (Check(TokenKind::kPercent)) {
        bop = BinaryOp::kMod;
      } else {
        return lhs;
      }
      const SourceLoc loc = Advance().loc;
      lhs = Expr::Binary(bop, std::move(lhs), ParseUnary(), loc);
    }
  }

  Expr ParseUnary() {
    if (Check(TokenKind::kBang)) {
      const SourceLoc loc = Advance().loc;
      return Expr::Unary(UnaryOp::kNot, ParseUnary(), loc);
    }
    if (Check(TokenKind::kMinus)) {
      const SourceLoc loc = Advance().loc;
      Expr operand = ParseUnary();
      // Negative integer literals are folded so that `-5` is one constant.
      if (operand.kind == Expr::Kind::kIntLit) {
        operand.int_value = -operand.int_value;
        operand.loc = loc;
        return operand;
      }
      return Expr::Unary(UnaryOp::kNeg, std::move(operand), loc);
    }
    return ParsePrimary();
  }

  Expr ParsePrimary() {
    const Token& tok = Current();
    switch (tok.kind) {
      case TokenKind::kInt:
        Advance();
        return Expr::Int(tok.int_value, tok.loc);
      case TokenKind::kTrue:
        Advance();
        return Expr::Bool(true, tok.loc);
      case TokenKind::kFalse:
        Advance();
        return Expr::Bool(false, tok.loc);
      case TokenKind::kString:
        Advance();
        return Expr::String(tok.text, tok.loc);
      case TokenKind::kLParen: {
        Advance();
        Expr inner = ParseExpr();
        Expect(TokenKind::kRParen);
        return inner;
      }
      case TokenKind::kIdent: {
        Advance();
        if (!Match(TokenKind::kLParen)) return Expr::Ident(tok.text, tok.loc);
        std::vector<Expr> args;
        if (!Check(TokenKind::kRParen)) {
          do {
            args.push_back(ParseExpr());
          } while (Match(TokenKind::kComma));
        }
        Expect(TokenKind::kRParen);
        return Expr::Call(tok.text, std::move(args), tok.loc);
      }
      default:
        Fail({TokenKind::kIdent, TokenKind::kInt, TokenKind::kString,
              TokenKind::kTrue, TokenKind::kFalse, TokenKind::kLParen,
              TokenKind::kBang, TokenKind::kMinus});
    }
  }

  std::vector<Token> tokens_;
  std::string file_;
  bool allow_tests_;
  size_t pos_ = 0;
};

}  // namespace

Program ParseProgram(std::string_view source, std::string source_path) {
  Program program;
  Parser parser(Tokenize(source, source_path), source_path,
                /*allow_tests=*/false);
  program.functions = parser.ParseFunctions();
  program.source_path = std::move(source_path);
  IndexProgram(program);
  return program;
}

TestFile ParseTestFile(std::string_view source, std::string path) {
  TestFile file;
  Parser parser(Tokenize(source, path), path, /*allow_tests=*/true);
  file.functions = parser.ParseFunctions();
  file.path = std::move(path);
  return file;
}

}  // namespace evotest::minilang
