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

// Command-line front end: run, gen, score, mutants.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "evotest/app/app.h"
#include "evotest/minilang/parser.h"

namespace {

using evotest::app::RunConfig;

// Flag values stay unset unless given, so they only override what the
// config file (or the defaults) already say.
struct Overrides {
  std::string config_path;
  std::optional<std::string> program;
  std::optional<std::string> backend;
  std::optional<uint64_t> seed;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<int> in_flight_cap;
  std::optional<int> max_retries;
  std::optional<int> samples;
  std::optional<double> crossover_probability;
  std::optional<double> time_budget;
  std::optional<double> selection_pressure;
  std::optional<uint64_t> ga_seed;
  std::optional<int> max_generations;
  bool disable_ga = false;
  bool disable_temperature_diversity = false;
  bool disable_mutation = false;
  std::optional<int64_t> step_budget;
  std::optional<int> workers;
  std::optional<std::string> report;
  std::optional<std::string> suite_output;
};

void AddConfigFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("program", o.program, "MiniLang program file");
  cmd->add_option("-c,--config", o.config_path, "JSON config file");
  cmd->add_option("--backend", o.backend, "mock or remote")
      ->check(CLI::IsMember({"mock", "remote"}));
  cmd->add_option("--seed", o.seed, "backend seed (required for mock)");
  cmd->add_option("--endpoint", o.endpoint, "chat-completions URL");
  cmd->add_option("--model", o.model, "remote model name");
  cmd->add_option("--in-flight-cap", o.in_flight_cap);
  cmd->add_option("--max-retries", o.max_retries);
  cmd->add_option("--samples", o.samples, "samples per strategy");
  cmd->add_option("--crossover-probability", o.crossover_probability);
  cmd->add_option("--time-budget", o.time_budget, "GA budget in seconds");
  cmd->add_option("--selection-pressure", o.selection_pressure);
  cmd->add_option("--ga-seed", o.ga_seed);
  cmd->add_option("--max-generations", o.max_generations);
  cmd->add_flag("--disable-ga", o.disable_ga);
  cmd->add_flag("--disable-temperature-diversity",
                o.disable_temperature_diversity);
  cmd->add_flag("--disable-mutation", o.disable_mutation);
  cmd->add_option("--step-budget", o.step_budget);
  cmd->add_option("-j,--workers", o.workers);
  cmd->add_option("-o,--report", o.report, "report output path");
  cmd->add_option("--suite-output", o.suite_output,
                  "write the final suite here");
}

template <typename T>
void Apply(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

RunConfig BuildConfig(const Overrides& o) {
  RunConfig c;
  if (!o.config_path.empty()) c = evotest::app::LoadConfigFile(o.config_path);
  Apply(o.program, c.program_path);
  Apply(o.backend, c.backend.kind);
  if (o.seed) c.backend.seed = *o.seed;
  Apply(o.endpoint, c.backend.endpoint);
  Apply(o.model, c.backend.model);
  Apply(o.in_flight_cap, c.backend.in_flight_cap);
  Apply(o.max_retries, c.backend.max_retries);
  Apply(o.samples, c.samples_per_strategy);
  Apply(o.crossover_probability, c.ga.crossover_probability);
  Apply(o.time_budget, c.ga.time_budget_seconds);
  Apply(o.selection_pressure, c.ga.selection_pressure);
  if (o.ga_seed) c.ga_seed = *o.ga_seed;
  if (o.max_generations) c.ga.max_generations = *o.max_generations;
  c.disable_ga = c.disable_ga || o.disable_ga;
  c.disable_temperature_diversity =
      c.disable_temperature_diversity || o.disable_temperature_diversity;
  c.disable_mutation = c.disable_mutation || o.disable_mutation;
  Apply(o.step_budget, c.step_budget);
  Apply(o.workers, c.workers);
  Apply(o.report, c.report_path);
  Apply(o.suite_output, c.suite_output_path);
  return c;
}

void PrintScore(const evotest::suite::FitnessScore& s) {
  std::printf("LCCT %.4f\nBCCT %.4f\nMSCT %.4f\nscalar %.4f\n", s.lcct, s.bcct,
              s.msct, s.scalar);
}

int CmdRun(const Overrides& o) {
  const RunConfig config = BuildConfig(o);
  std::ostream* progress = isatty(STDERR_FILENO) ? &std::cerr : nullptr;
  const auto result = evotest::app::Run(config, nullptr, progress);
  if (config.report_path.empty()) {
    std::cout << result.report.dump(2) << "\n";
  } else if (result.exit_code == evotest::app::kExitOk) {
    PrintScore(result.final_score);
  }
  return result.exit_code;
}

int CmdGen(const Overrides& o, const std::string& out_dir) {
  const RunConfig config = BuildConfig(o);
  const auto result = evotest::app::Gen(config);
  if (!out_dir.empty()) {
    for (const auto& r : result.suites) {
      evotest::app::WriteFile(out_dir + "/" + r.suite.suite_id + ".test.mini",
                              r.suite.Print());
    }
  }
  if (!config.report_path.empty()) {
    evotest::app::WriteFile(config.report_path, result.report.dump(2) + "\n");
  } else if (out_dir.empty()) {
    std::cout << result.report.dump(2) << "\n";
  }
  return evotest::app::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  CLI::App app{"LLM-seeded, GA-refined test generation for MiniLang"};
  app.require_subcommand(1);

  Overrides run_flags;
  CLI::App* run = app.add_subcommand("run", "generate, repair and evolve a suite");
  AddConfigFlags(run, run_flags);

  Overrides gen_flags;
  std::string gen_out_dir;
  CLI::App* gen = app.add_subcommand("gen", "initial population only");
  AddConfigFlags(gen, gen_flags);
  gen->add_option("--out-dir", gen_out_dir, "write each suite to a file here");

  std::string score_program, score_suite;
  int64_t score_budget = evotest::minilang::kDefaultStepBudget;
  bool score_json = false;
  CLI::App* score = app.add_subcommand("score", "evaluate a suite's fitness");
  score->add_option("program", score_program)->required();
  score->add_option("suite", score_suite)->required();
  score->add_option("--step-budget", score_budget);
  score->add_flag("--json", score_json);

  std::string mutants_program;
  bool mutants_all = false, mutants_json = false;
  CLI::App* mutants = app.add_subcommand("mutants", "list mutants of a program");
  mutants->add_option("program", mutants_program)->required();
  mutants->add_flag("--all", mutants_all, "include non-focal functions");
  mutants->add_flag("--json", mutants_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : evotest::app::kExitConfigError;
  }

  try {
    if (run->parsed()) return CmdRun(run_flags);
    if (gen->parsed()) return CmdGen(gen_flags, gen_out_dir);
    if (score->parsed()) {
      const auto r =
          evotest::app::Score(score_program, score_suite, score_budget);
      if (score_json) {
        nlohmann::json j = evotest::app::FitnessJson(r.detail.score);
        j["methods"] = r.size.method_count;
        j["statements"] = r.size.statement_count;
        std::cout << j.dump(2) << "\n";
      } else {
        PrintScore(r.detail.score);
      }
      return evotest::app::kExitOk;
    }
    if (mutants->parsed()) {
      if (mutants_json) {
        const auto program = evotest::minilang::ParseProgram(
            evotest::app::ReadFile(mutants_program),
            std::filesystem::path(mutants_program).filename().string());
        const auto list =
            evotest::mutation::EnumerateMutants(program, !mutants_all);
        std::cout << evotest::app::MutantRecords(program.source_path, list)
                         .dump(2)
                  << "\n";
      } else {
        for (const auto& line :
             evotest::app::MutantListing(mutants_program, !mutants_all)) {
          std::cout << line << "\n";
        }
      }
      return evotest::app::kExitOk;
    }
  } catch (const evotest::app::ConfigError& e) {
    std::cerr << "evotest: " << e.what() << "\n";
    return evotest::app::kExitConfigError;
  } catch (const evotest::minilang::ParseError& e) {
    std::cerr << "evotest: " << e.what() << "\n";
    return evotest::app::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "evotest: " << e.what() << "\n";
    return evotest::app::kExitRuntimeError;
  }
  return evotest::app::kExitOk;
}
