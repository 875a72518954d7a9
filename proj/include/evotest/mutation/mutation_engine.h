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

#ifndef EVOTEST_MUTATION_MUTATION_ENGINE_H_
#define EVOTEST_MUTATION_MUTATION_ENGINE_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evotest/minilang/ast.h"
#include "evotest/minilang/interpreter.h"

namespace evotest::mutation {

// PIT-style operators restricted to the MiniLang surface.
enum class MutationOperator {
  kArithmeticReplace,   // + <-> -, * <-> /, % -> *
  kRelationalBoundary,  // < <-> <=, > <-> >=
  kNegateConditional,   // == <-> !=, if/while condition c -> !(c)
  kReturnValueMutate,   // int e -> e + 1, bool e -> !e, string e -> ""
  kConstantReplace,     // int c -> c + 1, bool b -> !b
};

std::string_view OperatorName(MutationOperator op);

// Where a mutation applies: a function, a chain of statements (arm 0 is the
// if/while body or the function body, arm 1 the else arm), then a chain of
// operand indices from the statement's expression root.
struct MutationSite {
  int function_index = 0;
  std::string function;
  std::vector<std::pair<int, int>> statement_path;
  std::vector<int> expr_path;
  minilang::SourceLoc loc;

  std::string ToString() const;
};

enum class MutantStatus { kNotRun, kKilled, kSurvived };

std::string_view MutantStatusName(MutantStatus status);

struct Mutant {
  int mutant_id = 0;
  MutationOperator op = MutationOperator::kArithmeticReplace;
  MutationSite site;
  std::string original_fragment;
  std::string mutated_fragment;
  bool in_focal = false;
  MutantStatus status = MutantStatus::kNotRun;
  // Subtree substituted at the site.
  minilang::Expr replacement;
  // First test observed to fail against the mutant, if killed.
  std::string killed_by;
};

struct MutationResult {
  std::vector<Mutant> mutants;
  int killed_count = 0;
  int total_count = 0;
  // 100 * killed / total; 100 when there are no mutants.
  double msct_percent = 100.0;
};

// A mutant that does not survive a print/re-parse cycle.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Static type of an expression where it can be decided from literals,
// operators, local assignments and callee return statements.
enum class StaticType { kUnknown, kInt, kBool, kString };

StaticType InferType(const minilang::Program& program,
                     const minilang::FunctionDecl& fn,
                     const minilang::Expr& expr);

// Source-order enumeration of every applicable operator at every site.
// Mutants whose printed program duplicates an earlier mutant (or the
// original) are dropped; ids are assigned after deduplication.
std::vector<Mutant> EnumerateMutants(const minilang::Program& program,
                                     bool focal_only);

minilang::Program ApplyMutant(const minilang::Program& program,
                              const Mutant& mutant);

// The test methods and helpers a mutant run needs, borrowed from a suite.
struct TestHarness {
  std::vector<const minilang::FunctionDecl*> tests;  // in execution order
  std::vector<const minilang::FunctionDecl*> helpers;
  std::string path = "suite.test.mini";
};

// Runs each mutant against the harness tests in order and stops at the
// first test whose status is not pass. `workers` > 1 runs mutants on
// several threads; results are identical either way.
MutationResult ExecuteMutants(const minilang::Program& program,
                              std::vector<Mutant> mutants,
                              const TestHarness& harness,
                              int64_t step_budget = minilang::kDefaultStepBudget,
                              int workers = 1);

// Mutants paired with their mutated programs, built once and reused across
// many suites.
struct CompiledMutants {
  std::vector<Mutant> mutants;
  std::vector<minilang::Program> programs;
};

// Applies each mutant and checks that it re-parses. Throws InternalError.
CompiledMutants CompileMutants(const minilang::Program& program,
                               std::vector<Mutant> mutants);

MutationResult ExecuteCompiled(const CompiledMutants& compiled,
                               const TestHarness& harness,
                               int64_t step_budget = minilang::kDefaultStepBudget,
                               int workers = 1);

}  // namespace evotest::mutation

#endif  // EVOTEST_MUTATION_MUTATION_ENGINE_H_
