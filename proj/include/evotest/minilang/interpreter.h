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

#ifndef EVOTEST_MINILANG_INTERPRETER_H_
#define EVOTEST_MINILANG_INTERPRETER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "evotest/minilang/ast.h"
#include "evotest/minilang/coverage.h"

namespace evotest::minilang {

inline constexpr int64_t kDefaultStepBudget = 100'000;
inline constexpr int kMaxCallDepth = 256;

struct Unit {
  friend bool operator==(const Unit&, const Unit&) = default;
};

using Value = std::variant<int64_t, bool, std::string, Unit>;

std::string FormatValue(const Value& value);
std::string_view TypeName(const Value& value);
// Literal expression producing the value; Unit has no literal form.
Expr ValueLiteral(const Value& value);

enum class RunStatus {
  kPass,
  kAssertionFailure,
  kRuntimeError,
  kStepBudgetExceeded,
};

std::string_view RunStatusName(RunStatus status);

enum class ErrorKind {
  kNone,
  kAssertion,
  kUndefinedVariable,
  kUndefinedFunction,
  kTypeMismatch,
  kDivisionByZero,
  kArityMismatch,
  kOverflow,
  kStackOverflow,
  kIndexOutOfRange,
  kStepBudget,
};

struct StackFrame {
  std::string function;
  std::string file;
  SourceLoc loc;
  bool in_test_file = false;
};

struct RunOutcome {
  RunStatus status = RunStatus::kPass;
  std::string message;  // empty on pass
  // "ERROR <kind> at <file>:<line>:<col> in <function>" followed by one
  // "  at <function> (<file>:<line>:<col>)" line per frame, innermost first.
  std::string trace;
  std::vector<StackFrame> frames;
  ErrorKind error_kind = ErrorKind::kNone;
  std::string undefined_name;  // for kUndefinedVariable/kUndefinedFunction
  CoverageReport coverage;
  int64_t steps_used = 0;
  Value result = Unit{};  // value returned by the called function or method
};

// Receives every statement execution and condition outcome. Used by tracing
// oracles; the interpreter's own coverage does not go through it.
class ExecutionObserver {
 public:
  virtual ~ExecutionObserver() = default;
  virtual void OnStatement(std::string_view function, const Stmt& stmt,
                           bool program_code) = 0;
  virtual void OnBranch(int branch_id, Arm arm) = 0;
};

// Tree-walking interpreter over an immutable program plus test-file helpers.
// Holds no mutable state; concurrent runs are safe.
class Interpreter {
 public:
  Interpreter(const Program& program,
              std::vector<const FunctionDecl*> helpers = {},
              std::string test_file_path = "suite.test.mini");

  // Runs a test method. Coverage includes everything executed up to the
  // first failure.
  RunOutcome RunMethod(const FunctionDecl& method,
                       int64_t step_budget = kDefaultStepBudget,
                       ExecutionObserver* observer = nullptr) const;

  // Calls a program function (or helper) with argument values.
  RunOutcome CallFunction(std::string_view name, std::span<const Value> args,
                          int64_t step_budget = kDefaultStepBudget) const;

  const Program& program() const { return program_; }

 private:
  friend class Execution;

  const Program& program_;
  std::string test_file_path_;
  std::unordered_map<std::string, const FunctionDecl*> program_functions_;
  std::unordered_map<std::string, const FunctionDecl*> helpers_;
  CoverageReport empty_coverage_;
};

// Convenience: runs `method_name` from a parsed test file.
RunOutcome RunTestMethod(const Program& program, const TestFile& tests,
                         std::string_view method_name,
                         int64_t step_budget = kDefaultStepBudget);

}  // namespace evotest::minilang

#endif  // EVOTEST_MINILANG_INTERPRETER_H_
