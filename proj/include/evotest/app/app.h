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

#ifndef EVOTEST_APP_APP_H_
#define EVOTEST_APP_APP_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evotest/evolution/evolution.h"
#include "evotest/genesis/genesis.h"
#include "evotest/llm/gateway.h"
#include "evotest/llm/mock_backend.h"
#include "evotest/mutation/mutation_engine.h"
#include "evotest/suite/test_suite.h"

namespace evotest::app {

inline constexpr int kReportSchemaVersion = 1;

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BackendConfig {
  std::string kind = "mock";  // "mock" or "remote"
  std::string endpoint;
  std::string model;
  std::optional<uint64_t> seed;
  int in_flight_cap = llm::Gateway::kDefaultInFlightCap;
  int max_retries = 3;
  llm::MockOptions mock;
};

struct RunConfig {
  std::string program_path;
  BackendConfig backend;
  int samples_per_strategy = 5;
  evolution::GaParams ga;  // population_size is derived from the spec
  std::optional<uint64_t> ga_seed;  // defaults to the backend seed
  bool disable_ga = false;
  bool disable_temperature_diversity = false;
  bool disable_mutation = false;
  int64_t step_budget = minilang::kDefaultStepBudget;
  int workers = 1;
  std::string report_path;
  std::string suite_output_path;
};

// Reads the JSON config format; unknown keys are rejected.
RunConfig ConfigFromJson(const nlohmann::json& j);
nlohmann::json ConfigToJson(const RunConfig& config);
RunConfig LoadConfigFile(const std::string& path);

// Checks that make sense before any model call: backend choice, seed for
// the mock, endpoint and key for the remote backend, parameter ranges and
// the program file. Throws ConfigError.
void ValidateConfig(const RunConfig& config);

// Builds the configured backend. Throws ConfigError if the remote backend
// has no API key in the environment.
std::shared_ptr<llm::Backend> MakeBackend(const BackendConfig& config);

// Reads and preprocesses the program. Throws ConfigError if it is missing
// and minilang::ParseError if it does not parse.
std::string LoadProgramSource(const std::string& path);

struct RunResult {
  nlohmann::json report;
  std::vector<genesis::PipelineResult> initial;
  std::vector<suite::FitnessScore> initial_scores;
  suite::FitnessScore best_initial_score;
  std::optional<evolution::EvolveResult> evolution;
  suite::TestSuite final_suite;
  suite::FitnessScore final_score;
  int64_t llm_calls = 0;
  int exit_code = kExitOk;
};

// End to end: preprocess, generate the initial population, evolve (unless
// disabled), report. `backend` overrides the configured one. Progress lines
// go to `progress` when given.
RunResult Run(const RunConfig& config,
              std::shared_ptr<llm::Backend> backend = nullptr,
              std::ostream* progress = nullptr);

struct GenResult {
  nlohmann::json report;
  std::vector<genesis::PipelineResult> suites;
};

// Initial population only.
GenResult Gen(const RunConfig& config,
              std::shared_ptr<llm::Backend> backend = nullptr);

struct ScoreResult {
  evolution::FitnessDetail detail;
  suite::SuiteSize size;
};

ScoreResult Score(const std::string& program_path,
                  const std::string& suite_path,
                  int64_t step_budget = minilang::kDefaultStepBudget);

// One line per mutant: "<id> <operator> <file>:<line> <original> -> <mutated>".
std::vector<std::string> MutantListing(const std::string& program_path,
                                       bool focal_only = true);

nlohmann::json MutantRecords(const std::string& program_file,
                             const std::vector<mutation::Mutant>& mutants);
nlohmann::json FitnessJson(const suite::FitnessScore& score);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace evotest::app

#endif  // EVOTEST_APP_APP_H_
