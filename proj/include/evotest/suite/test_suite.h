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

#ifndef EVOTEST_SUITE_TEST_SUITE_H_
#define EVOTEST_SUITE_TEST_SUITE_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/minilang/ast.h"
#include "evotest/minilang/interpreter.h"
#include "evotest/mutation/mutation_engine.h"

namespace evotest::suite {

enum class MethodStatus { kUnknown, kPassing, kFailing };

std::string_view MethodStatusName(MethodStatus status);

struct TestMethod {
  minilang::FunctionDecl decl;
  MethodStatus status = MethodStatus::kUnknown;
  int assertion_count = 0;

  const std::string& name() const { return decl.name; }
};

// Number of assert_* calls anywhere in the block.
int CountAssertions(const std::vector<minilang::Stmt>& block);

// Coverage and mutation metrics of the passing tests, each in [0, 100].
struct FitnessScore {
  double lcct = 0.0;
  double bcct = 0.0;
  double msct = 0.0;
  double scalar = 0.0;

  static FitnessScore FromMetrics(double lcct, double bcct, double msct);

  friend bool operator==(const FitnessScore&, const FitnessScore&) = default;
};

// 0.3 * BCCT + 0.2 * LCCT + 0.5 * MSCT
double FitnessScalar(double bcct, double lcct, double msct);

// Ordered lexicographically: fewer methods first, then fewer statements.
struct SuiteSize {
  int method_count = 0;
  int statement_count = 0;

  friend auto operator<=>(const SuiteSize&, const SuiteSize&) = default;
  SuiteSize operator+(const SuiteSize& other) const {
    return {method_count + other.method_count,
            statement_count + other.statement_count};
  }
};

// A GA chromosome: test methods plus the helper functions they call.
// Treated as an immutable value; every operation below returns a new suite.
struct TestSuite {
  std::string suite_id;
  // "A3:2" (agent slot and sample), "crossover", "mutated", ...
  std::string provenance;
  std::string path = "suite.test.mini";
  std::vector<TestMethod> methods;
  std::vector<minilang::FunctionDecl> helpers;

  struct CachedFitness {
    uint64_t key = 0;
    FitnessScore score;
  };
  std::optional<CachedFitness> fitness_cache;

  // Methods first, then helpers, in canonical form.
  std::string Print() const;
  uint64_t ContentHash() const;
  minilang::TestFile ToTestFile() const;

  const TestMethod* FindMethod(std::string_view name) const;
  const minilang::FunctionDecl* FindHelper(std::string_view name) const;

  // Cache key combining the printed suite and the program it is scored on.
  uint64_t FitnessKey(uint64_t program_fingerprint) const;
  std::optional<FitnessScore> CachedScore(uint64_t program_fingerprint) const;
};

// Parses a test file; `test` functions become methods, the rest helpers.
// Statuses start unknown. Throws minilang::ParseError.
TestSuite SplitMethods(std::string_view source,
                       std::string path = "suite.test.mini");

// Re-prints and re-parses so source locations match Print(). Keeps ids,
// provenance and method statuses; drops the fitness cache if content moved.
TestSuite Normalize(const TestSuite& suite);

// Helpers reachable from the method through helper-to-helper calls.
std::set<std::string> HelperClosure(const TestSuite& suite,
                                    const minilang::FunctionDecl& method);

// Methods at `indices` (in order) with their helper closure.
TestSuite SelectMethods(const TestSuite& suite,
                        const std::vector<size_t>& indices);

// Concatenation. Later items colliding on name get the suffix _m<k>
// (smallest k that is free); helper renames are applied to callers.
// Methods whose printed body equals an existing one are dropped, as are
// identical helpers.
TestSuite MergeSuites(const TestSuite& a, const TestSuite& b);

// Keeps methods whose outcome is pass (marking them passing) and the helpers
// they still reference.
TestSuite PruneFailing(const TestSuite& suite,
                       const std::map<std::string, minilang::RunOutcome>& outcomes);

SuiteSize SizeOf(const TestSuite& suite);

// Runs every method against the program.
std::map<std::string, minilang::RunOutcome> RunSuite(
    const minilang::Program& program, const TestSuite& suite,
    int64_t step_budget = minilang::kDefaultStepBudget);

// Borrowed view for the mutation engine: the named tests in the given order.
mutation::TestHarness MakeHarness(const TestSuite& suite,
                                  const std::vector<std::string>& tests);

// Replaces calls to `from` with `to` throughout the block.
void RenameCalls(std::vector<minilang::Stmt>& block, const std::string& from,
                 const std::string& to);

}  // namespace evotest::suite

#endif  // EVOTEST_SUITE_TEST_SUITE_H_
