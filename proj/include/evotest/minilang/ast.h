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

#ifndef EVOTEST_MINILANG_AST_H_
#define EVOTEST_MINILANG_AST_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evotest::minilang {

struct SourceLoc {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
  friend auto operator<=>(const SourceLoc&, const SourceLoc&) = default;
};

enum class BinaryOp {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kMod,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kAnd,
  kOr,
};

enum class UnaryOp { kNot, kNeg };

std::string_view BinaryOpSymbol(BinaryOp op);
std::string_view UnaryOpSymbol(UnaryOp op);
bool IsArithmetic(BinaryOp op);
bool IsRelational(BinaryOp op);  // < <= > >=
bool IsEquality(BinaryOp op);    // == !=
bool IsLogical(BinaryOp op);     // && ||

// Expression node. Children are held by value; copying an Expr deep-copies
// the subtree.
struct Expr {
  enum class Kind {
    kIntLit,
    kBoolLit,
    kStringLit,
    kIdent,
    kCall,
    kUnary,
    kBinary,
  };

  Kind kind = Kind::kIntLit;
  SourceLoc loc;
  int64_t int_value = 0;
  bool bool_value = false;
  // Identifier name, callee name, or decoded string literal contents.
  std::string text;
  BinaryOp binary_op = BinaryOp::kAdd;
  UnaryOp unary_op = UnaryOp::kNot;
  // Unary: one operand. Binary: lhs, rhs. Call: arguments.
  std::vector<Expr> operands;

  static Expr Int(int64_t value, SourceLoc loc = {});
  static Expr Bool(bool value, SourceLoc loc = {});
  static Expr String(std::string value, SourceLoc loc = {});
  static Expr Ident(std::string name, SourceLoc loc = {});
  static Expr Call(std::string callee, std::vector<Expr> args,
                   SourceLoc loc = {});
  static Expr Unary(UnaryOp op, Expr operand, SourceLoc loc = {});
  static Expr Binary(BinaryOp op, Expr lhs, Expr rhs, SourceLoc loc = {});
};

// Structural equality; ignores source locations.
bool SameShape(const Expr& a, const Expr& b);

struct Stmt {
  enum class Kind { kLet, kAssign, kIf, kWhile, kReturn, kExpr };

  Kind kind = Kind::kExpr;
  SourceLoc loc;
  // Assigned by IndexProgram (program files) or IndexTestFile; -1 otherwise.
  int id = -1;
  // Assigned to if/while statements by IndexProgram; -1 otherwise.
  int branch_id = -1;
  // Target of let/assign.
  std::string name;
  // Let/assign value, if/while condition, return value, expression.
  std::optional<Expr> expr;
  // If: then arm. While: loop body.
  std::vector<Stmt> body;
  std::vector<Stmt> else_body;
  bool has_else = false;
};

bool SameShape(const Stmt& a, const Stmt& b);
bool SameShape(const std::vector<Stmt>& a, const std::vector<Stmt>& b);

struct FunctionDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<Stmt> body;
  SourceLoc loc;
  // Declared with `test` rather than `fn`; only legal in test files.
  bool is_test = false;
  // Program functions: name has no leading underscore.
  bool is_focal = false;
};

bool SameShape(const FunctionDecl& a, const FunctionDecl& b);

struct BranchInfo {
  std::string function;
  int line = 0;
  int arm_count = 2;
};

// A parsed program-under-test.
struct Program {
  std::string source_path;
  std::vector<FunctionDecl> functions;
  // statement id -> 1-based source line
  std::map<int, int> line_index;
  // statement id -> owning function name
  std::map<int, std::string> statement_function;
  std::map<int, BranchInfo> branch_index;

  const FunctionDecl* FindFunction(std::string_view name) const;
  int StatementCount() const { return static_cast<int>(line_index.size()); }
  int BranchCount() const { return static_cast<int>(branch_index.size()); }
};

bool SameShape(const Program& a, const Program& b);

// Assigns statement ids, branch ids and focal flags, and rebuilds the
// indexes. Ids follow source order (pre-order over statements).
void IndexProgram(Program& program);

// A parsed test file: `test` methods plus helper functions in source order.
struct TestFile {
  std::string path;
  std::vector<FunctionDecl> functions;
};

// Counts statements in a block, including nested blocks.
int CountStatements(const std::vector<Stmt>& block);

// Names of functions called anywhere inside the block.
std::vector<std::string> CalledFunctions(const std::vector<Stmt>& block);

// Built-in functions available to both programs and tests.
bool IsBuiltin(std::string_view name);
bool IsAssertion(std::string_view name);

}  // namespace evotest::minilang

#endif  // EVOTEST_MINILANG_AST_H_
