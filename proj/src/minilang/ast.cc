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

#include "evotest/minilang/ast.h"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

namespace evotest::minilang {

std::string_view BinaryOpSymbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd:
      return "+";
    case BinaryOp::kSub:
      return "-";
    case BinaryOp::kMul:
      return "*";
    case BinaryOp::kDiv:
      return "/";
    case BinaryOp::kMod:
      return "%";
    case BinaryOp::kEq:
      return "==";
    case BinaryOp::kNe:
      return "!=";
    case BinaryOp::kLt:
      return "<";
    case BinaryOp::kLe:
      return "<=";
    case BinaryOp::kGt:
      return ">";
    case BinaryOp::kGe:
      return ">=";
    case BinaryOp::kAnd:
      return "&&";
    case BinaryOp::kOr:
      return "||";
  }
  return "?";
}

std::string_view UnaryOpSymbol(UnaryOp op) {
  return op == UnaryOp::kNot ? "!" : "-";
}

bool IsArithmetic(BinaryOp op) {
  return op == BinaryOp::kAdd || op == BinaryOp::kSub ||
         op == BinaryOp::kMul || op == BinaryOp::kDiv || op == BinaryOp::kMod;
}

bool IsRelational(BinaryOp op) {
  return op == BinaryOp::kLt || op == BinaryOp::kLe || op == BinaryOp::kGt ||
         op == BinaryOp::kGe;
}

bool IsEquality(BinaryOp op) {
  return op == BinaryOp::kEq || op == BinaryOp::kNe;
}

bool IsLogical(BinaryOp op) {
  return op == BinaryOp::kAnd || op == BinaryOp::kOr;
}

Expr Expr::Int(int64_t value, SourceLoc loc) {
  Expr e;
  e.kind = Kind::kIntLit;
  e.int_value = value;
  e.loc = loc;
  return e;
}

Expr Expr::Bool(bool value, SourceLoc loc) {
  Expr e;
  e.kind = Kind::kBoolLit;
  e.bool_value = value;
  e.loc = loc;
  return e;
}

Expr Expr::String(std::string value, SourceLoc loc) {
  Expr e;
  e.kind = Kind::kStringLit;
  e.text = std::move(value);
  e.loc = loc;
  return e;
}

Expr Expr::Ident(std::string name, SourceLoc loc) {
  Expr e;
  e.kind = Kind::kIdent;
  e.text = std::move(name);
  e.loc = loc;
  return e;
}

Expr Expr::Call(std::string callee, std::vector<Expr> args, SourceLoc loc) {
  Expr e;
  e.kind = Kind::kCall;
  e.text = std::move(callee);
  e.operands = std::move(args);
  e.loc = loc;
  return e;
}

Expr Expr::Unary(UnaryOp op, Expr operand, SourceLoc loc) {
  Expr e;
  e.kind = Kind::kUnary;
  e.unary_op = op;
  e.operands.push_back(std::move(operand));
  e.loc = loc;
  return e;
}

Expr Expr::Binary(BinaryOp op, Expr lhs, Expr rhs, SourceLoc loc) {
  Expr e;
  e.kind = Kind::kBinary;
  e.binary_op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  e.loc = loc;
  return e;
}

bool SameShape(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.operands.size() != b.operands.size()) {
    return false;
  }
  switch (a.kind) {
    case Expr::Kind::kIntLit:
      if (a.int_value != b.int_value) return false;
      break;
    case Expr::Kind::kBoolLit:
      if (a.bool_value != b.bool_value) return false;
      break;
    case Expr::Kind::kStringLit:
    case Expr::Kind::kIdent:
    case Expr::Kind::kCall:
      if (a.text != b.text) return false;
      break;
    case Expr::Kind::kUnary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case Expr::Kind::kBinary:
      if (a.binary_op != b.binary_op) return false;
      break;
  }
  for (size_t i = 0; i < a.operands.size(); ++i) {
    if (!SameShape(a.operands[i], b.operands[i])) return false;
  }
  return true;
}

bool SameShape(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.has_else != b.has_else ||
      a.expr.has_value() != b.expr.has_value()) {
    return false;
  }
  if (a.expr && !SameShape(*a.expr, *b.expr)) return false;
  return SameShape(a.body, b.body) && SameShape(a.else_body, b.else_body);
}

bool SameShape(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!SameShape(a[i], b[i])) return false;
  }
  return true;
}

bool SameShape(const FunctionDecl& a, const FunctionDecl& b) {
  return a.name == b.name && a.params == b.params && a.is_test == b.is_test &&
         SameShape(a.body, b.body);
}

bool SameShape(const Program& a, const Program& b) {
  if (a.functions.size() != b.functions.size()) return false;
  for (size_t i = 0; i < a.functions.size(); ++i) {
    if (!SameShape(a.functions[i], b.functions[i])) return false;
  }
  return true;
}

const FunctionDecl* Program::FindFunction(std::string_view name) const {
  for (const auto& fn : functions) {
    if (fn.name == name) return &fn;
  }
  return nullptr;
}

namespace {

void IndexBlock(std::vector<Stmt>& block, const std::string& function,
                Program& program, int& next_stmt, int& next_branch) {
  for (auto& stmt : block) {
    stmt.id = next_stmt++;
    program.line_index[stmt.id] = stmt.loc.line;
    program.statement_function[stmt.id] = function;
    if (stmt.kind == Stmt::Kind::kIf || stmt.kind == Stmt::Kind::kWhile) {
      stmt.branch_id = next_branch++;
      program.branch_index[stmt.branch_id] =
          BranchInfo{function, stmt.loc.line, 2};
    } else {
      stmt.branch_id = -1;
    }
    IndexBlock(stmt.body, function, program, next_stmt, next_branch);
    IndexBlock(stmt.else_body, function, program, next_stmt, next_branch);
  }
}

void CollectCalls(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::kCall) out.push_back(e.text);
  for (const auto& op : e.operands) CollectCalls(op, out);
}

void CollectCalls(const std::vector<Stmt>& block,
                  std::vector<std::string>& out) {
  for (const auto& stmt : block) {
    if (stmt.expr) CollectCalls(*stmt.expr, out);
    CollectCalls(stmt.body, out);
    CollectCalls(stmt.else_body, out);
  }
}

}  // namespace

void IndexProgram(Program& program) {
  program.line_index.clear();
  program.statement_function.clear();
  program.branch_index.clear();
  int next_stmt = 0;
  int next_branch = 0;
  for (auto& fn : program.functions) {
    fn.is_focal = !fn.is_test && !fn.name.starts_with('_');
    IndexBlock(fn.body, fn.name, program, next_stmt, next_branch);
  }
}

int CountStatements(const std::vector<Stmt>& block) {
  int count = 0;
  for (const auto& stmt : block) {
    count += 1 + CountStatements(stmt.body) + CountStatements(stmt.else_body);
  }
  return count;
}

std::vector<std::string> CalledFunctions(const std::vector<Stmt>& block) {
  std::vector<std::string> calls;
  CollectCalls(block, calls);
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (auto& name : calls) {
    if (seen.insert(name).second) unique.push_back(std::move(name));
  }
  return unique;
}

bool IsAssertion(std::string_view name) {
  return name == "assert_eq" || name == "assert_true" ||
         name == "assert_false";
}

bool IsBuiltin(std::string_view name) {
  return IsAssertion(name) || name == "len" || name == "char_at";
}

}  // namespace evotest::minilang
