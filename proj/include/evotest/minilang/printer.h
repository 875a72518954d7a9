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

#ifndef EVOTEST_MINILANG_PRINTER_H_
#define EVOTEST_MINILANG_PRINTER_H_

#include <string>
#include <vector>

#include "evotest/minilang/ast.h"

namespace evotest::minilang {

// Canonical pretty-printer. Output re-parses to a structurally identical
// tree; comments are not preserved.
std::string PrintExpr(const Expr& expr);
std::string PrintStmt(const Stmt& stmt, int indent = 0);
std::string PrintBlock(const std::vector<Stmt>& block, int indent);
std::string PrintFunction(const FunctionDecl& fn);
std::string PrintProgram(const Program& program);
std::string PrintTestFile(const TestFile& file);

// Single-line rendering of a statement's head, e.g. `return a + 1;` or
// `if (a < b)`. Used for mutant fragments and diagnostics.
std::string PrintStmtHead(const Stmt& stmt);

std::string QuoteString(const std::string& value);

}  // namespace evotest::minilang

#endif  // EVOTEST_MINILANG_PRINTER_H_
