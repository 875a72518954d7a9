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

#include "evotest/minilang/interpreter.h"

#include <sstream>
#include <utility>

#include "evotest/minilang/printer.h"

namespace evotest::minilang {

std::string FormatValue(const Value& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return QuoteString(v);
        } else {
          return "()";
        }
      },
      value);
}

std::string_view TypeName(const Value& value) {
  switch (value.index()) {
    case 0:
      return "int";
    case 1:
      return "bool";
    case 2:
      return "string";
    default:
      return "unit";
  }
}

Expr ValueLiteral(const Value& value) {
  if (const auto* i = std::get_if<int64_t>(&value)) return Expr::Int(*i);
  if (const auto* b = std::get_if<bool>(&value)) return Expr::Bool(*b);
  if (const auto* s = std::get_if<std::string>(&value)) return Expr::String(*s);
  return Expr::Ident("unit");
}

std::string_view RunStatusName(RunStatus status) {
  switch (status) {
    case RunStatus::kPass:
      return "pass";
    case RunStatus::kAssertionFailure:
      return "assertion_failure";
    case RunStatus::kRuntimeError:
      return "runtime_error";
    case RunStatus::kStepBudgetExceeded:
      return "step_budget_exceeded";
  }
  return "?";
}

namespace {

struct Failure {
  RunStatus status;
  ErrorKind kind;
  std::string message;
  SourceLoc loc;
  std::string undefined_name;
};

struct Frame {
  const FunctionDecl* fn;
  bool program_code;
  SourceLoc current;
  std::vector<std::pair<std::string, Value>> vars;

  Value* Lookup(const std::string& name) {
    for (auto& [var, value] : vars) {
      if (var == name) return &value;
    }
    return nullptr;
  }
};

enum class Flow { kNormal, kReturn };

}  // namespace

class Execution {
 public:
  Execution(const Interpreter& interp, int64_t budget,
            ExecutionObserver* observer)
      : interp_(interp),
        budget_(budget),
        observer_(observer),
        executed_(interp.program_.line_index.size(), 0),
        branches_(interp.program_.branch_index.size(), 0) {}

  RunOutcome RunMethod(const FunctionDecl& method) {
    RunOutcome outcome;
    try {
      frames_.push_back(Frame{&method, false, method.loc, {}});
      ExecBlock(method.body, outcome.result);
      frames_.pop_back();
    } catch (const Failure& failure) {
      Fill(outcome, failure);
    }
    Finish(outcome);
    return outcome;
  }

  RunOutcome Call(std::string_view name, std::span<const Value> args) {
    RunOutcome outcome;
    try {
      std::vector<Value> values(args.begin(), args.end());
      outcome.result = Invoke(std::string(name), std::move(values), {});
    } catch (const Failure& failure) {
      Fill(outcome, failure);
    }
    Finish(outcome);
    return outcome;
  }

 private:
  [[noreturn]] void Raise(ErrorKind kind, std::string message, SourceLoc loc,
                          std::string undefined = {}) {
    const RunStatus status = kind == ErrorKind::kAssertion
                                 ? RunStatus::kAssertionFailure
                             : kind == ErrorKind::kStepBudget
                                 ? RunStatus::kStepBudgetExceeded
                                 : RunStatus::kRuntimeError;
    throw Failure{status, kind, std::move(message), loc, std::move(undefined)};
  }

  std::string_view FileOf(const Frame& frame) const {
    return frame.program_code ? std::string_view(interp_.program_.source_path)
                              : std::string_view(interp_.test_file_path_);
  }

  void Fill(RunOutcome& outcome, const Failure& failure) {
    outcome.status = failure.status;
    outcome.error_kind = failure.kind;
    outcome.message = failure.message;
    outcome.undefined_name = failure.undefined_name;
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      StackFrame frame;
      frame.function = it->fn->name;
      frame.file = std::string(FileOf(*it));
      frame.loc = it->current;
      frame.in_test_file = !it->program_code;
      if (it == frames_.rbegin() && failure.loc.line > 0) {
        frame.loc = failure.loc;
      }
      outcome.frames.push_back(std::move(frame));
    }
    std::ostringstream trace;
    trace << "ERROR " << RunStatusName(failure.status);
    if (!outcome.frames.empty()) {
      const StackFrame& top = outcome.frames.front();
      trace << " at " << top.file << ":" << top.loc.line << ":"
            << top.loc.column << " in " << top.function;
      for (const auto& frame : outcome.frames) {
        trace << "\n  at " << frame.function << " (" << frame.file << ":"
              << frame.loc.line << ":" << frame.loc.column << ")";
      }
    }
    outcome.trace = trace.str();
  }

  void Finish(RunOutcome& outcome) {
    outcome.steps_used = steps_;
    CoverageReport& cov = outcome.coverage;
    cov = interp_.empty_coverage_;
    const Program& program = interp_.program_;
    for (const auto& [id, line] : program.line_index) {
      if (executed_[id]) {
        cov.executed_lines.emplace(program.statement_function.at(id), line);
      }
    }
    for (size_t id = 0; id < branches_.size(); ++id) {
      if (branches_[id] & 1) cov.branch_outcomes.emplace(id, Arm::kThen);
      if (branches_[id] & 2) cov.branch_outcomes.emplace(id, Arm::kElse);
    }
  }

  void Step(const Stmt& stmt) {
    Frame& frame = frames_.back();
    frame.current = stmt.loc;
    if (steps_ >= budget_) {
      Raise(ErrorKind::kStepBudget,
            "step budget of " + std::to_string(budget_) + " exceeded",
            stmt.loc);
    }
    ++steps_;
    if (frame.program_code && stmt.id >= 0 &&
        stmt.id < static_cast<int>(executed_.size())) {
      executed_[stmt.id] = 1;
    }
    if (observer_ != nullptr) {
      observer_->OnStatement(frame.fn->name, stmt, frame.program_code);
    }
  }

  void RecordBranch(const Stmt& stmt, bool taken) {
    if (!frames_.back().program_code || stmt.branch_id < 0) return;
    branches_[stmt.branch_id] |= taken ? 1 : 2;
    if (observer_ != nullptr) {
      observer_->OnBranch(stmt.branch_id, taken ? Arm::kThen : Arm::kElse);
    }
  }

  bool Condition(const Stmt& stmt) {
    const Value v = Eval(*stmt.expr);
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    Raise(ErrorKind::kTypeMismatch,
          "condition must be bool, got " + std::string(TypeName(v)),
          stmt.expr->loc);
  }

  Flow ExecBlock(const std::vector<Stmt>& block, Value& ret) {
    for (const auto& stmt : block) {
      if (Exec(stmt, ret) == Flow::kReturn) return Flow::kReturn;
    }
    return Flow::kNormal;
  }

  Flow Exec(const Stmt& stmt, Value& ret) {
    switch (stmt.kind) {
      case Stmt::Kind::kLet: {
        Step(stmt);
        Value v = Eval(*stmt.expr);
        Frame& frame = frames_.back();
        if (Value* existing = frame.Lookup(stmt.name)) {
          *existing = std::move(v);
        } else {
          frame.vars.emplace_back(stmt.name, std::move(v));
        }
        return Flow::kNormal;
      }
      case Stmt::Kind::kAssign: {
        Step(stmt);
        Value v = Eval(*stmt.expr);
        Value* slot = frames_.back().Lookup(stmt.name);
        if (slot == nullptr) {
          Raise(ErrorKind::kUndefinedVariable,
                "undefined variable '" + stmt.name + "'", stmt.loc, stmt.name);
        }
        *slot = std::move(v);
        return Flow::kNormal;
      }
      case Stmt::Kind::kIf: {
        Step(stmt);
        const bool taken = Condition(stmt);
        RecordBranch(stmt, taken);
        if (taken) return ExecBlock(stmt.body, ret);
        return ExecBlock(stmt.else_body, ret);
      }
      case Stmt::Kind::kWhile: {
        // Every condition evaluation counts as one step of the loop
        // statement, so empty loops still exhaust the budget.
        while (true) {
          Step(stmt);
          const bool taken = Condition(stmt);
          RecordBranch(stmt, taken);
          if (!taken) return Flow::kNormal;
          if (ExecBlock(stmt.body, ret) == Flow::kReturn) return Flow::kReturn;
        }
      }
      case Stmt::Kind::kReturn:
        Step(stmt);
        ret = stmt.expr ? Eval(*stmt.expr) : Value{Unit{}};
        return Flow::kReturn;
      case Stmt::Kind::kExpr:
        Step(stmt);
        Eval(*stmt.expr);
        return Flow::kNormal;
    }
    return Flow::kNormal;
  }

  int64_t ExpectInt(const Value& v, const Expr& at, std::string_view what) {
    if (const auto* i = std::get_if<int64_t>(&v)) return *i;
    Raise(ErrorKind::kTypeMismatch,
          std::string(what) + " expects int, got " + std::string(TypeName(v)),
          at.loc);
  }

  bool ExpectBool(const Value& v, const Expr& at, std::string_view what) {
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    Raise(ErrorKind::kTypeMismatch,
          std::string(what) + " expects bool, got " + std::string(TypeName(v)),
          at.loc);
  }

  Value Eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::kIntLit:
        return e.int_value;
      case Expr::Kind::kBoolLit:
        return e.bool_value;
      case Expr::Kind::kStringLit:
        return e.text;
      case Expr::Kind::kIdent: {
        Value* slot = frames_.back().Lookup(e.text);
        if (slot == nullptr) {
          Raise(ErrorKind::kUndefinedVariable,
                "undefined variable '" + e.text + "'", e.loc, e.text);
        }
        return *slot;
      }
      case Expr::Kind::kUnary: {
        const Value v = Eval(e.operands[0]);
        if (e.unary_op == UnaryOp::kNot) return !ExpectBool(v, e, "'!'");
        const int64_t i = ExpectInt(v, e, "unary '-'");
        int64_t out;
        if (__builtin_sub_overflow(int64_t{0}, i, &out)) {
          Raise(ErrorKind::kOverflow, "integer overflow", e.loc);
        }
        return out;
      }
      case Expr::Kind::kBinary:
        return EvalBinary(e);
      case Expr::Kind::kCall: {
        std::vector<Value> args;
        args.reserve(e.operands.size());
        for (const auto& arg : e.operands) args.push_back(Eval(arg));
        return Invoke(e.text, std::move(args), e.loc);
      }
    }
    return Unit{};
  }

  Value EvalBinary(const Expr& e) {
    const BinaryOp op = e.binary_op;
    const std::string symbol(BinaryOpSymbol(op));
    if (IsLogical(op)) {
      const bool lhs = ExpectBool(Eval(e.operands[0]), e, "'" + symbol + "'");
      if (op == BinaryOp::kAnd && !lhs) return false;
      if (op == BinaryOp::kOr && lhs) return true;
      return ExpectBool(Eval(e.operands[1]), e, "'" + symbol + "'");
    }
    const Value lhs = Eval(e.operands[0]);
    const Value rhs = Eval(e.operands[1]);
    if (IsEquality(op)) {
      if (lhs.index() != rhs.index()) {
        Raise(ErrorKind::kTypeMismatch,
              "cannot compare " + std::string(TypeName(lhs)) + " with " +
                  std::string(TypeName(rhs)),
              e.loc);
      }
      return (lhs == rhs) == (op == BinaryOp::kEq);
    }
    const int64_t a = ExpectInt(lhs, e, "'" + symbol + "'");
    const int64_t b = ExpectInt(rhs, e, "'" + symbol + "'");
    int64_t out = 0;
    bool overflow = false;
    switch (op) {
      case BinaryOp::kAdd:
        overflow = __builtin_add_overflow(a, b, &out);
        break;
      case BinaryOp::kSub:
        overflow = __builtin_sub_overflow(a, b, &out);
        break;
      case BinaryOp::kMul:
        overflow = __builtin_mul_overflow(a, b, &out);
        break;
      case BinaryOp::kDiv:
      case BinaryOp::kMod:
        if (b == 0) Raise(ErrorKind::kDivisionByZero, "division by zero", e.loc);
        if (a == INT64_MIN && b == -1) {
          overflow = true;
        } else {
          out = op == BinaryOp::kDiv ? a / b : a % b;
        }
        break;
      case BinaryOp::kLt:
        return a < b;
      case BinaryOp::kLe:
        return a <= b;
      case BinaryOp::kGt:
        return a > b;
      case BinaryOp::kGe:
        return a >= b;
      default:
        break;
    }
    if (overflow) Raise(ErrorKind::kOverflow, "integer overflow", e.loc);
    return out;
  }

  void CheckArity(const std::string& name, size_t expected, size_t actual,
                  SourceLoc loc) {
    if (expected != actual) {
      Raise(ErrorKind::kArityMismatch,
            "'" + name + "' expects " + std::to_string(expected) +
                " argument(s), got " + std::to_string(actual),
            loc);
    }
  }

  Value Builtin(const std::string& name, std::vector<Value>& args,
                SourceLoc loc) {
    if (name == "assert_eq") {
      CheckArity(name, 2, args.size(), loc);
      if (args[0] != args[1]) {
        Raise(ErrorKind::kAssertion,
              "assert_eq failed: expected " + FormatValue(args[1]) +
                  ", actual " + FormatValue(args[0]),
              loc);
      }
      return Unit{};
    }
    if (name == "assert_true" || name == "assert_false") {
      CheckArity(name, 1, args.size(), loc);
      const auto* b = std::get_if<bool>(&args[0]);
      if (b == nullptr) {
        Raise(ErrorKind::kTypeMismatch,
              "'" + name + "' expects bool, got " +
                  std::string(TypeName(args[0])),
              loc);
      }
      const bool want = name == "assert_true";
      if (*b != want) {
        Raise(ErrorKind::kAssertion,
              name + " failed: expected " + (want ? "true" : "false") +
                  ", actual " + (*b ? "true" : "false"),
              loc);
      }
      return Unit{};
    }
    if (name == "len") {
      CheckArity(name, 1, args.size(), loc);
      const auto* s = std::get_if<std::string>(&args[0]);
      if (s == nullptr) {
        Raise(ErrorKind::kTypeMismatch,
              "'len' expects string, got " + std::string(TypeName(args[0])),
              loc);
      }
      return static_cast<int64_t>(s->size());
    }
    // char_at
    CheckArity(name, 2, args.size(), loc);
    const auto* s = std::get_if<std::string>(&args[0]);
    const auto* i = std::get_if<int64_t>(&args[1]);
    if (s == nullptr || i == nullptr) {
      Raise(ErrorKind::kTypeMismatch,
            "'char_at' expects (string, int), got (" +
                std::string(TypeName(args[0])) + ", " +
                std::string(TypeName(args[1])) + ")",
            loc);
    }
    if (*i < 0 || *i >= static_cast<int64_t>(s->size())) {
      Raise(ErrorKind::kIndexOutOfRange,
            "index " + std::to_string(*i) + " out of range for length " +
                std::to_string(s->size()),
            loc);
    }
    return std::string(1, (*s)[static_cast<size_t>(*i)]);
  }

  Value Invoke(const std::string& name, std::vector<Value> args,
               SourceLoc loc) {
    if (IsBuiltin(name)) return Builtin(name, args, loc);
    const bool from_test = frames_.empty() || !frames_.back().program_code;
    const FunctionDecl* fn = nullptr;
    bool program_code = true;
    if (auto it = interp_.program_functions_.find(name);
        it != interp_.program_functions_.end()) {
      fn = it->second;
    } else if (from_test) {
      if (auto hit = interp_.helpers_.find(name); hit != interp_.helpers_.end()) {
        fn = hit->second;
        program_code = false;
      }
    }
    if (fn == nullptr) {
      Raise(ErrorKind::kUndefinedFunction,
            "undefined function '" + name + "'", loc, name);
    }
    CheckArity(name, fn->params.size(), args.size(), loc);
    if (static_cast<int>(frames_.size()) >= kMaxCallDepth) {
      Raise(ErrorKind::kStackOverflow,
            "call depth exceeds " + std::to_string(kMaxCallDepth), loc);
    }
    Frame frame{fn, program_code, fn->loc, {}};
    frame.vars.reserve(fn->params.size() + 4);
    for (size_t i = 0; i < args.size(); ++i) {
      frame.vars.emplace_back(fn->params[i], std::move(args[i]));
    }
    frames_.push_back(std::move(frame));
    Value ret = Unit{};
    ExecBlock(fn->body, ret);
    frames_.pop_back();
    return ret;
  }

  const Interpreter& interp_;
  int64_t budget_;
  ExecutionObserver* observer_;
  int64_t steps_ = 0;
  std::vector<Frame> frames_;
  std::vector<uint8_t> executed_;
  std::vector<uint8_t> branches_;
};

Interpreter::Interpreter(const Program& program,
                         std::vector<const FunctionDecl*> helpers,
                         std::string test_file_path)
    : program_(program),
      test_file_path_(std::move(test_file_path)),
      empty_coverage_(EmptyCoverage(program)) {
  for (const auto& fn : program.functions) {
    program_functions_.emplace(fn.name, &fn);
  }
  for (const FunctionDecl* helper : helpers) {
    helpers_.emplace(helper->name, helper);
  }
}

RunOutcome Interpreter::RunMethod(const FunctionDecl& method,
                                  int64_t step_budget,
                                  ExecutionObserver* observer) const {
  return Execution(*this, step_budget, observer).RunMethod(method);
}

RunOutcome Interpreter::CallFunction(std::string_view name,
                                     std::span<const Value> args,
                                     int64_t step_budget) const {
  return Execution(*this, step_budget, nullptr).Call(name, args);
}

RunOutcome RunTestMethod(const Program& program, const TestFile& tests,
                         std::string_view method_name, int64_t step_budget) {
  std::vector<const FunctionDecl*> helpers;
  const FunctionDecl* method = nullptr;
  for (const auto& fn : tests.functions) {
    if (fn.is_test && fn.name == method_name) method = &fn;
    if (!fn.is_test) helpers.push_back(&fn);
  }
  if (method == nullptr) {
    throw UsageError("no test method named '" + std::string(method_name) +
                     "'");
  }
  return Interpreter(program, std::move(helpers), tests.path)
      .RunMethod(*method, step_budget);
}

}  // namespace evotest::minilang
