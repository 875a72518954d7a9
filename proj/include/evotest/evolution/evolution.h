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

#ifndef EVOTEST_EVOLUTION_EVOLUTION_H_
#define EVOTEST_EVOLUTION_EVOLUTION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evotest/llm/gateway.h"
#include "evotest/minilang/ast.h"
#include "evotest/minilang/coverage.h"
#include "evotest/mutation/mutation_engine.h"
#include "evotest/suite/test_suite.h"
#include "evotest/util/random.h"

namespace evotest::evolution {

struct GaParams {
  double crossover_probability = 0.8;
  double time_budget_seconds = 300.0;
  double perfect_fitness = 100.0;
  double selection_pressure = 1.5;
  int population_size = 25;
  uint64_t rng_seed = 0;
  // Optional cap on completed generations, checked alongside the clock.
  // Gives runs that do not depend on machine speed.
  std::optional<int> max_generations;
  bool enable_mutation = true;
};

// Throws std::invalid_argument on out-of-range fields.
void Validate(const GaParams& params);

struct FitnessDetail {
  suite::FitnessScore score;
  minilang::CoverageSummary coverage;
  mutation::MutationResult mutation;
  std::vector<std::string> passing;
};

// Scores suites against one program. Focal mutants are enumerated and
// compiled once; scores are cached on the suite's content hash plus the
// program fingerprint. Safe to share between threads.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const minilang::Program& program,
                   int64_t step_budget = minilang::kDefaultStepBudget,
                   int mutant_workers = 1);

  suite::FitnessScore Evaluate(const suite::TestSuite& suite);

  // Uncached, with the coverage and per-mutant details.
  FitnessDetail EvaluateDetailed(const suite::TestSuite& suite) const;

  const minilang::Program& program() const { return program_; }
  uint64_t program_fingerprint() const { return fingerprint_; }
  size_t mutant_count() const { return compiled_.mutants.size(); }
  int64_t evaluations() const;
  int64_t cache_hits() const;

 private:
  const minilang::Program& program_;
  int64_t step_budget_;
  int mutant_workers_;
  uint64_t fingerprint_;
  mutation::CompiledMutants compiled_;
  mutable std::mutex mu_;
  std::map<uint64_t, suite::FitnessScore> cache_;
  int64_t evaluations_ = 0;
  int64_t cache_hits_ = 0;
};

// One-off evaluation without a shared cache.
suite::FitnessScore EvaluateFitness(
    const minilang::Program& program, const suite::TestSuite& suite,
    int64_t step_budget = minilang::kDefaultStepBudget);

struct Scored {
  suite::TestSuite suite;
  suite::FitnessScore score;
};

// Total order used for ranking: higher scalar, then smaller size, then
// smaller suite id.
bool RanksBefore(const Scored& a, const Scored& b);

// Linear ranking: p(r) = (1/n) * (s - (2s - 2)(r - 1)/(n - 1)), r = 1 best.
// Throws std::invalid_argument when n < 2 or s is outside [1, 2].
std::vector<double> RankProbabilities(int n, double pressure);

// Draws two parent indices into `pool`. The second draw is repeated once if
// it picked the same index as the first.
std::pair<size_t, size_t> RankedSelect(const std::vector<Scored>& pool,
                                       double pressure, Rng& rng);

// Offspring A takes round(0.8 |p1|) methods of p1 and round(0.2 |p2|) of
// p2, sampled uniformly; offspring B takes the remaining methods of each.
std::pair<suite::TestSuite, suite::TestSuite> Crossover(
    const suite::TestSuite& p1, const suite::TestSuite& p2, Rng& rng);

struct MutationContext {
  const minilang::Program& program;
  std::string source;
  llm::Gateway* gateway = nullptr;  // null: no mutation calls
  int64_t step_budget = minilang::kDefaultStepBudget;
  int max_retries = 3;
};

struct MutateOutcome {
  suite::TestSuite suite;
  int attempted = 0;
  int accepted = 0;
};

// Whether `mutated` keeps every top-level statement of `original` in order,
// adds between 1 and 5 assertions and passes against the program.
bool AcceptMutatedMethod(const minilang::Program& program,
                         const suite::TestSuite& suite,
                         const minilang::FunctionDecl& original,
                         const minilang::FunctionDecl& mutated,
                         int64_t step_budget);

// Each method is picked with probability 1/N (N = method count) and sent to
// the mutation agent; replies failing AcceptMutatedMethod are dropped.
MutateOutcome MutateSuite(const MutationContext& ctx,
                          const suite::TestSuite& suite, Rng& rng,
                          uint64_t request_seed);

// Offspring replace the parents iff their best scalar beats the parents'
// best, or ties it with a combined size no larger.
bool AcceptOffspring(const Scored& p1, const Scored& p2, const Scored& o1,
                     const Scored& o2);

struct GenerationRecord {
  int index = 0;
  std::string best_suite_id;
  suite::FitnessScore best;
  double mean_scalar = 0.0;
  double elapsed_seconds = 0.0;
  int population = 0;
};

struct EvolveResult {
  Scored best;
  Scored best_initial;
  std::vector<GenerationRecord> generations;
  std::vector<Scored> final_population;
  bool early_exit = false;
  bool best_initial_reinjected = false;
  int mutation_attempts = 0;
  int mutations_accepted = 0;
  std::string stop_reason;  // "perfect", "time_budget", "max_generations"
};

using GenerationCallback = std::function<void(const GenerationRecord&)>;

// The evolutionary loop. `initial` must hold params.population_size >= 2
// suites.
EvolveResult Evolve(std::vector<suite::TestSuite> initial,
                    const MutationContext& ctx, const GaParams& params,
                    FitnessEvaluator& evaluator,
                    const GenerationCallback& on_generation = {});

}  // namespace evotest::evolution

#endif  // EVOTEST_EVOLUTION_EVOLUTION_H_
