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

#ifndef EVOTEST_GENESIS_GENESIS_H_
#define EVOTEST_GENESIS_GENESIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/llm/agents.h"
#include "evotest/llm/gateway.h"
#include "evotest/minilang/ast.h"
#include "evotest/minilang/interpreter.h"
#include "evotest/suite/test_suite.h"

namespace evotest::genesis {

// Strips comments and drops statements that follow a `return` in the same
// block, at any depth. Throws minilang::ParseError.
std::string PreprocessSource(std::string_view source,
                             const std::string& path = "program.mini");

struct PopulationSpec {
  std::vector<llm::AgentConfig> strategies = llm::DefaultAgents();
  int samples_per_strategy = 5;

  int population_size() const {
    return static_cast<int>(strategies.size()) * samples_per_strategy;
  }
};

// Default agents, or with `temperature_diversity` off, every slot keeps its
// id but uses A1's prompt and temperature.
PopulationSpec MakePopulationSpec(int samples_per_strategy,
                                  bool temperature_diversity = true);

inline constexpr int kMaxRepairRounds = 4;

enum class FixKind { kStatementRemoved, kIdentifierStubbed, kLlmRepair };

std::string_view FixKindName(FixKind kind);

struct Fix {
  FixKind kind;
  std::string location;  // "<method>:<line>:<col>" or "round <n>"
};

struct RepairState {
  int round = 0;
  std::string last_trace;
  std::vector<Fix> fixes_applied;
};

// Everything a pipeline stage needs besides its own inputs.
struct GenesisContext {
  const minilang::Program& program;
  // Preprocessed program text, as shown to the model.
  std::string source;
  llm::Gateway& gateway;
  int64_t step_budget = minilang::kDefaultStepBudget;
  int max_retries = 3;
};

// One line per focal function: "name(p1, p2)".
std::string FocalSignatures(const minilang::Program& program);

// Failure traces of the failing methods, separated by blank lines.
std::string FailureTraces(
    const suite::TestSuite& suite,
    const std::map<std::string, minilang::RunOutcome>& outcomes);

// Rules applied to every failing method until nothing changes:
//  - an undefined function one edit away from a program function is renamed;
//  - otherwise, when the failure is located in the test method itself, the
//    failing top-level statement is deleted together with every later
//    statement reading a variable it (transitively) defined. Methods left
//    empty are deleted.
// Failures raised inside program or helper code are left for the model.
// Returns the final outcomes.
std::map<std::string, minilang::RunOutcome> ApplyProgrammaticFixes(
    const minilang::Program& program, suite::TestSuite& suite,
    RepairState& state, int64_t step_budget);

struct RepairResult {
  suite::TestSuite suite;
  RepairState state;
};

// Up to kMaxRepairRounds model repairs, each preceded by programmatic
// fixes. Residual failures are pruned, so every returned method passes.
// `reply` is raw model output; it need not parse.
RepairResult RepairLoop(const GenesisContext& ctx,
                        const llm::AgentConfig& agent, std::string_view reply,
                        uint64_t seed);
RepairResult RepairLoop(const GenesisContext& ctx,
                        const llm::AgentConfig& agent, suite::TestSuite suite,
                        uint64_t seed);

// Coverage report text shown to the enhancement agent: per focal function
// percentages, then the MISSED items.
std::string CoverageReportText(const minilang::Program& program,
                               const suite::TestSuite& suite,
                               int64_t step_budget);

struct EnhanceResult {
  suite::TestSuite complementary;
  RepairState state;
  bool skipped = false;
};

// Asks the agent for tests covering what `suite` misses and repairs them.
// Returns only the new tests. Skipped when the suite already covers every
// focal line and branch arm.
EnhanceResult EnhanceCoverage(const GenesisContext& ctx,
                              const suite::TestSuite& suite,
                              const llm::AgentConfig& agent, uint64_t seed);

struct PipelineResult {
  suite::TestSuite suite;
  std::string agent_id;
  int sample = 0;
  RepairState generation_repair;
  RepairState enhancement_repair;
  bool enhancement_skipped = false;
  std::string error;  // set when generation failed outright
};

// Seed of pipeline (strategy, sample).
uint64_t PipelineSeed(uint64_t global_seed, int strategy, int sample);

PipelineResult RunPipeline(const GenesisContext& ctx,
                           const llm::AgentConfig& agent, int strategy_index,
                           int sample, uint64_t global_seed);

// Runs strategies x samples pipelines, `workers` at a time, and returns them
// in (strategy, sample) order.
std::vector<PipelineResult> GenerateInitial(const GenesisContext& ctx,
                                            const PopulationSpec& spec,
                                            uint64_t global_seed,
                                            int workers = 1);

}  // namespace evotest::genesis

#endif  // EVOTEST_GENESIS_GENESIS_H_
