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

#include "evotest/mutation/mutation_engine.h"

#include <algorithm>
#include <future>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "evotest/minilang/parser.h"
#include "evotest/minilang/printer.h"

namespace evotest::mutation {

using minilang::BinaryOp;
using minilang::Expr;
using minilang::FunctionDecl;
using minilang::Program;
using minilang::Stmt;

std::string_view OperatorName(MutationOperator op) {
  switch (op) {
    case MutationOperator::kArithmeticReplace:
      return "ArithmeticReplace";
    case MutationOperator::kRelationalBoundary:
      return "RelationalBoundary";
    case MutationOperator::kNegateConditional:
      return "NegateConditional";
    case MutationOperator::kReturnValueMutate:
      return "ReturnValueMutate";
    case MutationOperator::kConstantReplace:
      return "ConstantReplace";
  }
  return "?";
}

std::string_view MutantStatusName(MutantStatus status) {
  switch (status) {
    case MutantStatus::kNotRun:
      return "not_run";
    case MutantStatus::kKilled:
      return "killed";
    case MutantStatus::kSurvived:
      return "survived";
  }
  return "?";
}

std::string MutationSite::ToString() const {
  std::ostringstream out;
  out << function;
  for (const auto& [arm, index] : statement_path) {
    out << (arm == 0 ? "/s" : "/else") << index;
  }
  for (const int operand : expr_path) out << "/e" << operand;
  return out.str();
}

namespace {

class TypeInference {
 public:
  explicit TypeInference(const Program& program) : program_(program) {}

  StaticType Infer(const FunctionDecl& fn, const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::kIntLit:
        return StaticType::kInt;
      case Expr::Kind::kBoolLit:
        return StaticType::kBool;
      case Expr::Kind::kStringLit:
        return StaticType::kString;
      case Expr::Kind::kUnary:
        return e.unary_op == minilang::UnaryOp::kNot ? StaticType::kBool
                                                     : StaticType::kInt;
      case Expr::Kind::kBinary:
        return minilang::IsArithmetic(e.binary_op) ? StaticType::kInt
                                                   : StaticType::kBool;
      case Expr::Kind::kIdent:
        return InferVariable(fn, e.text);
      case Expr::Kind::kCall:
        return InferCall(e.text);
    }
    return StaticType::kUnknown;
  }

 private:
  // Known candidate types must agree; unknown candidates are ignored.
  static StaticType Unify(const std::vector<StaticType>& types) {
    StaticType result = StaticType::kUnknown;
    for (const StaticType t : types) {
      if (t == StaticType::kUnknown) continue;
      if (result != StaticType::kUnknown && t != result) {
        return StaticType::kUnknown;
      }
      result = t;
    }
    return result;
  }

  StaticType InferVariable(const FunctionDecl& fn, const std::string& name) {
    if (std::find(fn.params.begin(), fn.params.end(), name) !=
        fn.params.end()) {
      return StaticType::kUnknown;
    }
    const std::string key = fn.name + "#" + name;
    if (!visiting_.insert(key).second) return StaticType::kUnknown;
    std::vector<StaticType> types;
    CollectAssignments(fn, fn.body, name, types);
    visiting_.erase(key);
    return Unify(types);
  }

  void CollectAssignments(const FunctionDecl& fn,
                          const std::vector<Stmt>& block,
                          const std::string& name,
                          std::vector<StaticType>& types) {
    for (const auto& stmt : block) {
      if ((stmt.kind == Stmt::Kind::kLet ||
           stmt.kind == Stmt::Kind::kAssign) &&
          stmt.name == name) {
        types.push_back(Infer(fn, *stmt.expr));
      }
      CollectAssignments(fn, stmt.body, name, types);
      CollectAssignments(fn, stmt.else_body, name, types);
    }
  }

  StaticType InferCall(const std::string& callee) {
    if (callee == "len") return StaticType::kInt;
    if (callee == "char_at") return StaticType::kString;
    const FunctionDecl* fn = program_.FindFunction(callee);
    if (fn == nullptr) return StaticType::kUnknown;
    if (!visiting_.insert(callee).second) return StaticType::kUnknown;
    std::vector<StaticType> types;
    CollectReturns(*fn, fn->body, types);
    visiting_.erase(callee);
    return Unify(types);
  }

  void CollectReturns(const FunctionDecl& fn, const std::vector<Stmt>& block,
                      std::vector<StaticType>& types) {
    for (const auto& stmt : block) {
      if (stmt.kind == Stmt::Kind::kReturn) {
        types.push_back(stmt.expr ? Infer(fn, *stmt.expr)
                                  : StaticType::kUnknown);
      }
      CollectReturns(fn, stmt.body, types);
      CollectReturns(fn, stmt.else_body, types);
    }
  }

  const Program& program_;
  std::unordered_set<std::string> visiting_;
};

class Enumerator {
 public:
  Enumerator(const Program& program, bool focal_only)
      : program_(program), focal_only_(focal_only), types_(program) {}

  std::vector<Mutant> Run() {
    for (size_t fi = 0; fi < program_.functions.size(); ++fi) {
      const FunctionDecl& fn = program_.functions[fi];
      if (focal_only_ && !fn.is_focal) continue;
      site_.function_index = static_cast<int>(fi);
      site_.function = fn.name;
      WalkBlock(fn, fn.body, 0);
    }
    return Deduplicate();
  }

 private:
  void Add(MutationOperator op, const FunctionDecl& fn, const Expr& original,
           Expr replacement, minilang::SourceLoc loc, std::string before,
           std::string after) {
    if (minilang::SameShape(original, replacement)) return;
    Mutant m;
    m.op = op;
    m.site = site_;
    m.site.loc = loc;
    m.original_fragment = std::move(before);
    m.mutated_fragment = std::move(after);
    m.in_focal = fn.is_focal;
    m.replacement = std::move(replacement);
    candidates_.push_back(std::move(m));
  }

  void WalkBlock(const FunctionDecl& fn, const std::vector<Stmt>& block,
                 int arm) {
    for (size_t i = 0; i < block.size(); ++i) {
      const Stmt& stmt = block[i];
      site_.statement_path.emplace_back(arm, static_cast<int>(i));
      if (stmt.expr) {
        site_.expr_path.clear();
        StatementLevel(fn, stmt);
        WalkExpr(fn, *stmt.expr);
      }
      WalkBlock(fn, stmt.body, 0);
      WalkBlock(fn, stmt.else_body, 1);
      site_.statement_path.pop_back();
    }
  }

  void StatementLevel(const FunctionDecl& fn, const Stmt& stmt) {
    const Expr& e = *stmt.expr;
    if (stmt.kind == Stmt::Kind::kIf || stmt.kind == Stmt::Kind::kWhile) {
      Stmt mutated = stmt;
      mutated.expr = Expr::Unary(minilang::UnaryOp::kNot, e, e.loc);
      Add(MutationOperator::kNegateConditional, fn, e, *mutated.expr,
          stmt.loc, minilang::PrintStmtHead(stmt),
          minilang::PrintStmtHead(mutated));
    }
    if (stmt.kind == Stmt::Kind::kReturn) {
      std::optional<Expr> replacement;
      switch (types_.Infer(fn, e)) {
        case StaticType::kInt:
          replacement = Expr::Binary(BinaryOp::kAdd, e, Expr::Int(1, e.loc),
                                     e.loc);
          break;
        case StaticType::kBool:
          replacement = Expr::Unary(minilang::UnaryOp::kNot, e, e.loc);
          break;
        case StaticType::kString:
          replacement = Expr::String("", e.loc);
          break;
        case StaticType::kUnknown:
          break;
      }
      if (replacement) {
        Stmt mutated = stmt;
        mutated.expr = *replacement;
        Add(MutationOperator::kReturnValueMutate, fn, e, *replacement,
            stmt.loc, minilang::PrintStmtHead(stmt),
            minilang::PrintStmtHead(mutated));
      }
    }
  }

  static std::optional<BinaryOp> Swap(MutationOperator op, BinaryOp bop) {
    switch (op) {
      case MutationOperator::kArithmeticReplace:
        switch (bop) {
          case BinaryOp::kAdd:
            return BinaryOp::kSub;
          case BinaryOp::kSub:
            return BinaryOp::kAdd;
          case BinaryOp::kMul:
            return BinaryOp::kDiv;
          case BinaryOp::kDiv:
            return BinaryOp::kMul;
          case BinaryOp::kMod:
            return BinaryOp::kMul;
          default:
            return std::nullopt;
        }
      case MutationOperator::kRelationalBoundary:
        switch (bop) {
          case BinaryOp::kLt:
            return BinaryOp::kLe;
          case BinaryOp::kLe:
            return BinaryOp::kLt;
          case BinaryOp::kGt:
            return BinaryOp::kGe;
          case BinaryOp::kGe:
            return BinaryOp::kGt;
          default:
            return std::nullopt;
        }
      case MutationOperator::kNegateConditional:
        if (bop == BinaryOp::kEq) return BinaryOp::kNe;
        if (bop == BinaryOp::kNe) return BinaryOp::kEq;
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  void WalkExpr(const FunctionDecl& fn, const Expr& e) {
    if (e.kind == Expr::Kind::kBinary) {
      for (const MutationOperator op : {MutationOperator::kArithmeticReplace,
                                        MutationOperator::kRelationalBoundary,
                                        MutationOperator::kNegateConditional}) {
        if (auto swapped = Swap(op, e.binary_op)) {
          Expr mutated = e;
          mutated.binary_op = *swapped;
          Add(op, fn, e, mutated, e.loc, minilang::PrintExpr(e),
              minilang::PrintExpr(mutated));
        }
      }
    } else if (e.kind == Expr::Kind::kIntLit) {
      if (e.int_value < std::numeric_limits<int64_t>::max()) {
        Expr mutated = Expr::Int(e.int_value + 1, e.loc);
        Add(MutationOperator::kConstantReplace, fn, e, mutated, e.loc,
            minilang::PrintExpr(e), minilang::PrintExpr(mutated));
      }
    } else if (e.kind == Expr::Kind::kBoolLit) {
      Expr mutated = Expr::Unary(minilang::UnaryOp::kNot, e, e.loc);
      Add(MutationOperator::kConstantReplace, fn, e, mutated, e.loc,
          minilang::PrintExpr(e), minilang::PrintExpr(mutated));
    }
    for (size_t k = 0; k < e.operands.size(); ++k) {
      site_.expr_path.push_back(static_cast<int>(k));
      WalkExpr(fn, e.operands[k]);
      site_.expr_path.pop_back();
    }
  }

  std::vector<Mutant> Deduplicate() {
    std::set<std::string> seen{minilang::PrintProgram(program_)};
    std::vector<Mutant> unique;
    for (auto& m : candidates_) {
      if (!seen.insert(minilang::PrintProgram(ApplyMutant(program_, m)))
               .second) {
        continue;
      }
      m.mutant_id = static_cast<int>(unique.size());
      unique.push_back(std::move(m));
    }
    return unique;
  }

  const Program& program_;
  bool focal_only_;
  TypeInference types_;
  MutationSite site_;
  std::vector<Mutant> candidates_;
};

Expr& Navigate(Expr& root, const std::vector<int>& path) {
  Expr* node = &root;
  for (const int k : path) node = &node->operands.at(k);
  return *node;
}

}  // namespace

StaticType InferType(const Program& program, const FunctionDecl& fn,
                     const Expr& expr) {
  return TypeInference(program).Infer(fn, expr);
}

std::vector<Mutant> EnumerateMutants(const Program& program, bool focal_only) {
  return Enumerator(program, focal_only).Run();
}

Program ApplyMutant(const Program& program, const Mutant& mutant) {
  Program mutated = program;
  FunctionDecl& fn = mutated.functions.at(mutant.site.function_index);
  // Each path entry names the arm of the enclosing statement (the function
  // body for the first entry) and an index into it.
  Stmt* stmt = nullptr;
  for (const auto& [arm, index] : mutant.site.statement_path) {
    std::vector<Stmt>& block = stmt == nullptr ? fn.body
                               : arm == 0      ? stmt->body
                                               : stmt->else_body;
    stmt = &block.at(index);
  }
  if (stmt == nullptr || !stmt->expr) {
    throw InternalError("mutation site has no expression: " +
                        mutant.site.ToString());
  }
  Navigate(*stmt->expr, mutant.site.expr_path) = mutant.replacement;
  return mutated;
}

namespace {

void RunOne(const Program& mutated, const TestHarness& harness,
            int64_t step_budget, Mutant& mutant) {
  const minilang::Interpreter interp(mutated, harness.helpers, harness.path);
  mutant.status = MutantStatus::kSurvived;
  for (const FunctionDecl* test : harness.tests) {
    const auto outcome = interp.RunMethod(*test, step_budget);
    if (outcome.status != minilang::RunStatus::kPass) {
      mutant.status = MutantStatus::kKilled;
      mutant.killed_by = test->name;
      return;
    }
  }
}

}  // namespace

CompiledMutants CompileMutants(const Program& program,
                               std::vector<Mutant> mutants) {
  CompiledMutants compiled;
  compiled.programs.reserve(mutants.size());
  for (const auto& m : mutants) {
    Program p = ApplyMutant(program, m);
    try {
      minilang::ParseProgram(minilang::PrintProgram(p), p.source_path);
    } catch (const minilang::ParseError& e) {
      throw InternalError("mutant " + std::to_string(m.mutant_id) +
                          " does not re-parse: " + e.what());
    }
    compiled.programs.push_back(std::move(p));
  }
  compiled.mutants = std::move(mutants);
  return compiled;
}

MutationResult ExecuteCompiled(const CompiledMutants& compiled,
                               const TestHarness& harness, int64_t step_budget,
                               int workers) {
  std::vector<Mutant> mutants = compiled.mutants;
  const std::vector<Program>& mutated = compiled.programs;
  if (workers <= 1 || mutants.size() < 2) {
    for (size_t i = 0; i < mutants.size(); ++i) {
      RunOne(mutated[i], harness, step_budget, mutants[i]);
    }
  } else {
    std::vector<std::future<void>> tasks;
    const size_t stride = static_cast<size_t>(workers);
    for (size_t w = 0; w < stride; ++w) {
      tasks.push_back(std::async(std::launch::async, [&, w] {
        for (size_t i = w; i < mutants.size(); i += stride) {
          RunOne(mutated[i], harness, step_budget, mutants[i]);
        }
      }));
    }
    for (auto& task : tasks) task.get();
  }

  MutationResult result;
  result.total_count = static_cast<int>(mutants.size());
  for (const auto& m : mutants) {
    if (m.status == MutantStatus::kKilled) ++result.killed_count;
  }
  result.msct_percent =
      result.total_count == 0
          ? 100.0
          : 100.0 * result.killed_count / result.total_count;
  result.mutants = std::move(mutants);
  return result;
}

MutationResult ExecuteMutants(const Program& program,
                              std::vector<Mutant> mutants,
                              const TestHarness& harness, int64_t step_budget,
                              int workers) {
  return ExecuteCompiled(CompileMutants(program, std::move(mutants)), harness,
                         step_budget, workers);
}

}  // namespace evotest::mutation
