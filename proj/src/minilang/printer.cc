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

#include "evotest/minilang/printer.h"

#include <string>

namespace evotest::minilang {

namespace {

constexpr int kPrecUnary = 7;
constexpr int kPrecPrimary = 8;

int Precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::kOr:
      return 1;
    case BinaryOp::kAnd:
      return 2;
    case BinaryOp::kEq:
    case BinaryOp::kNe:
      return 3;
    case BinaryOp::kLt:
    case BinaryOp::kLe:
    case BinaryOp::kGt:
    case BinaryOp::kGe:
      return 4;
    case BinaryOp::kAdd:
    case BinaryOp::kSub:
      return 5;
    case BinaryOp::kMul:
    case BinaryOp::kDiv:
    case BinaryOp::kMod:
      return 6;
  }
  return 0;
}

int Precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kBinary:
      return Precedence(e.binary_op);
    case Expr::Kind::kUnary:
      return kPrecUnary;
    case Expr::Kind::kIntLit:
      return e.int_value < 0 ? kPrecUnary : kPrecPrimary;
    default:
      return kPrecPrimary;
  }
}

void Emit(const Expr& e, std::string& out);

void EmitOperand(const Expr& e, bool parens, std::string& out) {
  if (parens) out.push_back('(');
  Emit(e, out);
  if (parens) out.push_back(')');
}

void Emit(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::kIntLit:
      out += std::to_string(e.int_value);
      return;
    case Expr::Kind::kBoolLit:
      out += e.bool_value ? "true" : "false";
      return;
    case Expr::Kind::kStringLit:
      out += QuoteString(e.text);
      return;
    case Expr::Kind::kIdent:
      out += e.text;
      return;
    case Expr::Kind::kCall:
      out += e.text;
      out.push_back('(');
      for (size_t i = 0; i < e.operands.size(); ++i) {
        if (i > 0) out += ", ";
        Emit(e.operands[i], out);
      }
      out.push_back(')');
      return;
    case Expr::Kind::kUnary: {
      const Expr& operand = e.operands[0];
      out += UnaryOpSymbol(e.unary_op);
      // `-` applied to an integer literal would re-parse as a folded literal.
      const bool parens =
          Precedence(operand) < kPrecUnary ||
          (e.unary_op == UnaryOp::kNeg &&
           (operand.kind == Expr::Kind::kIntLit ||
            (operand.kind == Expr::Kind::kUnary &&
             operand.unary_op == UnaryOp::kNeg)));
      EmitOperand(operand, parens, out);
      return;
    }
    case Expr::Kind::kBinary: {
      const int prec = Precedence(e.binary_op);
      EmitOperand(e.operands[0], Precedence(e.operands[0]) < prec, out);
      out.push_back(' ');
      out += BinaryOpSymbol(e.binary_op);
      out.push_back(' ');
      EmitOperand(e.operands[1], Precedence(e.operands[1]) <= prec, out);
      return;
    }
  }
}

void Indent(int indent, std::string& out) { out.append(indent * 2, ' '); }

void EmitStmt(const Stmt& s, int indent, std::string& out);

void EmitBlockBody(const std::vector<Stmt>& block, int indent,
                   std::string& out) {
  for (const auto& stmt : block) EmitStmt(stmt, indent, out);
}

void EmitIfTail(const Stmt& s, int indent, std::string& out) {
  out += "if (";
  Emit(*s.expr, out);
  out += ") {\n";
  EmitBlockBody(s.body, indent + 1, out);
  Indent(indent, out);
  out += "}";
  if (!s.has_else) {
    out += "\n";
    return;
  }
  if (s.else_body.size() == 1 && s.else_body[0].kind == Stmt::Kind::kIf) {
    out += " else ";
    EmitIfTail(s.else_body[0], indent, out);
    return;
  }
  out += " else {\n";
  EmitBlockBody(s.else_body, indent + 1, out);
  Indent(indent, out);
  out += "}\n";
}

void EmitStmt(const Stmt& s, int indent, std::string& out) {
  Indent(indent, out);
  switch (s.kind) {
    case Stmt::Kind::kIf:
      EmitIfTail(s, indent, out);
      return;
    case Stmt::Kind::kWhile:
      out += "while (";
      Emit(*s.expr, out);
      out += ") {\n";
      EmitBlockBody(s.body, indent + 1, out);
      Indent(indent, out);
      out += "}\n";
      return;
    default:
      out += PrintStmtHead(s);
      out += "\n";
      return;
  }
}

}  // namespace

std::string QuoteString(const std::string& value) {
  std::string out = "\"";
  for (const char c : value) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string PrintExpr(const Expr& expr) {
  std::string out;
  Emit(expr, out);
  return out;
}

std::string PrintStmtHead(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::kLet:
      return "let " + s.name + " = " + PrintExpr(*s.expr) + ";";
    case Stmt::Kind::kAssign:
      return s.name + " = " + PrintExpr(*s.expr) + ";";
    case Stmt::Kind::kIf:
      return "if (" + PrintExpr(*s.expr) + ")";
    case Stmt::Kind::kWhile:
      return "while (" + PrintExpr(*s.expr) + ")";
    case Stmt::Kind::kReturn:
      return s.expr ? "return " + PrintExpr(*s.expr) + ";" : "return;";
    case Stmt::Kind::kExpr:
      return PrintExpr(*s.expr) + ";";
  }
  return "";
}

std::string PrintStmt(const Stmt& stmt, int indent) {
  std::string out;
  EmitStmt(stmt, indent, out);
  return out;
}

std::string PrintBlock(const std::vector<Stmt>& block, int indent) {
  std::string out;
  EmitBlockBody(block, indent, out);
  return out;
}

std::string PrintFunction(const FunctionDecl& fn) {
  std::string out = fn.is_test ? "test " : "fn ";
  out += fn.name;
  out.push_back('(');
  for (size_t i = 0; i < fn.params.size(); ++i) {
    if (i > 0) out += ", ";
    out += fn.params[i];
  }
  out += ") {\n";
  EmitBlockBody(fn.body, 1, out);
  out += "}\n";
  return out;
}

std::string PrintProgram(const Program& program) {
  std::string out;
  for (size_t i = 0; i < program.functions.size(); ++i) {
    if (i > 0) out += "\n";
    out += PrintFunction(program.functions[i]);
  }
  return out;
}

std::string PrintTestFile(const TestFile& file) {
  std::string out;
  for (size_t i = 0; i < file.functions.size(); ++i) {
    if (i > 0) out += "\n";
    out += PrintFunction(file.functions[i]);
  }
  return out;
}

}  // namespace evotest::minilang
