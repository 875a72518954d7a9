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

#include "evotest/app/app.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "evotest/llm/remote_backend.h"
#include "evotest/minilang/coverage.h"
#include "evotest/minilang/parser.h"
#include "evotest/minilang/printer.h"

namespace evotest::app {
namespace {

using nlohmann::json;

void CheckKeys(const json& j, const std::string& where,
               const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown config key " + where + "." + key);
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key) || j[key].is_null()) return;
  try {
    out = j[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key " + where + "." + key + " has the wrong type");
  }
}

template <typename T>
void ReadOptional(const json& j, const char* key, std::optional<T>& out,
                  const std::string& where) {
  if (!j.contains(key) || j[key].is_null()) return;
  T value{};
  Read(j, key, value, where);
  out = value;
}

std::string Hex(uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

json RepairJson(const genesis::RepairState& state) {
  json fixes = json::array();
  for (const auto& fix : state.fixes_applied) {
    fixes.push_back({{"kind", genesis::FixKindName(fix.kind)},
                     {"location", fix.location}});
  }
  return {{"round", state.round}, {"fixes", fixes}};
}

json SizeJson(const suite::SuiteSize& size) {
  return {{"methods", size.method_count}, {"statements", size.statement_count}};
}

std::string FileName(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

struct Prepared {
  std::string source;
  minilang::Program program;
  std::shared_ptr<llm::Backend> backend;
};

Prepared Prepare(const RunConfig& config,
                 std::shared_ptr<llm::Backend> backend) {
  ValidateConfig(config);
  Prepared p;
  p.source = LoadProgramSource(config.program_path);
  p.program = minilang::ParseProgram(p.source, FileName(config.program_path));
  p.backend = backend ? std::move(backend) : MakeBackend(config.backend);
  return p;
}

uint64_t BackendSeed(const RunConfig& config) {
  return config.backend.seed.value_or(0);
}

genesis::PopulationSpec SpecFor(const RunConfig& config) {
  return genesis::MakePopulationSpec(config.samples_per_strategy,
                                     !config.disable_temperature_diversity);
}

json PipelineJson(const genesis::PipelineResult& r) {
  json j = {{"suite_id", r.suite.suite_id},
            {"provenance", r.suite.provenance},
            {"agent", r.agent_id},
            {"sample", r.sample},
            {"size", SizeJson(suite::SizeOf(r.suite))},
            {"generation_repair", RepairJson(r.generation_repair)},
            {"enhancement_repair", RepairJson(r.enhancement_repair)},
            {"enhancement_skipped", r.enhancement_skipped}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

RunConfig ConfigFromJson(const json& j) {
  RunConfig c;
  CheckKeys(j, "config",
            {"program", "backend", "population", "ga", "ablations",
             "step_budget", "workers", "report", "suite_output"});
  Read(j, "program", c.program_path, "config");
  Read(j, "step_budget", c.step_budget, "config");
  Read(j, "workers", c.workers, "config");
  Read(j, "report", c.report_path, "config");
  Read(j, "suite_output", c.suite_output_path, "config");
  if (j.contains("backend")) {
    const json& b = j["backend"];
    CheckKeys(b, "backend",
              {"kind", "endpoint", "model", "seed", "in_flight_cap",
               "max_retries", "mock"});
    Read(b, "kind", c.backend.kind, "backend");
    Read(b, "endpoint", c.backend.endpoint, "backend");
    Read(b, "model", c.backend.model, "backend");
    ReadOptional(b, "seed", c.backend.seed, "backend");
    Read(b, "in_flight_cap", c.backend.in_flight_cap, "backend");
    Read(b, "max_retries", c.backend.max_retries, "backend");
    if (b.contains("mock")) {
      const json& m = b["mock"];
      CheckKeys(m, "backend.mock",
                {"wrong_expectation_rate", "typo_rate", "malformed_rate",
                 "repair_success_rate", "weak_assertion_rate", "helper_rate",
                 "enhance_probes", "enhance_max_tests"});
      llm::MockOptions& o = c.backend.mock;
      Read(m, "wrong_expectation_rate", o.wrong_expectation_rate, "backend.mock");
      Read(m, "typo_rate", o.typo_rate, "backend.mock");
      Read(m, "malformed_rate", o.malformed_rate, "backend.mock");
      Read(m, "repair_success_rate", o.repair_success_rate, "backend.mock");
      Read(m, "weak_assertion_rate", o.weak_assertion_rate, "backend.mock");
      Read(m, "helper_rate", o.helper_rate, "backend.mock");
      Read(m, "enhance_probes", o.enhance_probes, "backend.mock");
      Read(m, "enhance_max_tests", o.enhance_max_tests, "backend.mock");
    }
  }
  if (j.contains("population")) {
    const json& p = j["population"];
    CheckKeys(p, "population", {"samples_per_strategy"});
    Read(p, "samples_per_strategy", c.samples_per_strategy, "population");
  }
  if (j.contains("ga")) {
    const json& g = j["ga"];
    CheckKeys(g, "ga",
              {"crossover_probability", "time_budget_seconds",
               "selection_pressure", "rng_seed", "max_generations"});
    Read(g, "crossover_probability", c.ga.crossover_probability, "ga");
    Read(g, "time_budget_seconds", c.ga.time_budget_seconds, "ga");
    Read(g, "selection_pressure", c.ga.selection_pressure, "ga");
    ReadOptional(g, "rng_seed", c.ga_seed, "ga");
    ReadOptional(g, "max_generations", c.ga.max_generations, "ga");
  }
  if (j.contains("ablations")) {
    const json& a = j["ablations"];
    CheckKeys(a, "ablations",
              {"disable_ga", "disable_temperature_diversity",
               "disable_mutation"});
    Read(a, "disable_ga", c.disable_ga, "ablations");
    Read(a, "disable_temperature_diversity", c.disable_temperature_diversity,
         "ablations");
    Read(a, "disable_mutation", c.disable_mutation, "ablations");
  }
  return c;
}

json ConfigToJson(const RunConfig& c) {
  const llm::MockOptions& o = c.backend.mock;
  json backend = {{"kind", c.backend.kind},
                  {"endpoint", c.backend.endpoint},
                  {"model", c.backend.model},
                  {"seed", c.backend.seed ? json(*c.backend.seed) : json()},
                  {"in_flight_cap", c.backend.in_flight_cap},
                  {"max_retries", c.backend.max_retries}};
  if (c.backend.kind == "mock") {
    backend["mock"] = {{"wrong_expectation_rate", o.wrong_expectation_rate},
                       {"typo_rate", o.typo_rate},
                       {"malformed_rate", o.malformed_rate},
                       {"repair_success_rate", o.repair_success_rate},
                       {"weak_assertion_rate", o.weak_assertion_rate},
                       {"helper_rate", o.helper_rate},
                       {"enhance_probes", o.enhance_probes},
                       {"enhance_max_tests", o.enhance_max_tests}};
  }
  return {
      {"program", c.program_path},
      {"backend", backend},
      {"population", {{"samples_per_strategy", c.samples_per_strategy}}},
      {"ga",
       {{"crossover_probability", c.ga.crossover_probability},
        {"time_budget_seconds", c.ga.time_budget_seconds},
        {"selection_pressure", c.ga.selection_pressure},
        {"rng_seed", c.ga_seed ? json(*c.ga_seed) : json()},
        {"max_generations",
         c.ga.max_generations ? json(*c.ga.max_generations) : json()}}},
      {"ablations",
       {{"disable_ga", c.disable_ga},
        {"disable_temperature_diversity", c.disable_temperature_diversity},
        {"disable_mutation", c.disable_mutation}}},
      {"step_budget", c.step_budget},
      {"workers", c.workers},
      {"report", c.report_path},
      {"suite_output", c.suite_output_path},
  };
}

RunConfig LoadConfigFile(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return ConfigFromJson(j);
}

void ValidateConfig(const RunConfig& c) {
  if (c.backend.kind == "mock") {
    if (!c.backend.seed) throw ConfigError("the mock backend needs a seed");
  } else if (c.backend.kind == "remote") {
    if (c.backend.endpoint.empty()) {
      throw ConfigError("the remote backend needs an endpoint URL");
    }
    if (c.backend.model.empty()) {
      throw ConfigError("the remote backend needs a model name");
    }
    const char* key = std::getenv(llm::kApiKeyEnv);
    if (key == nullptr || *key == '\0') {
      throw ConfigError(std::string("the remote backend needs the API key in $") +
                        llm::kApiKeyEnv);
    }
  } else {
    throw ConfigError("backend must be \"mock\" or \"remote\", got \"" +
                      c.backend.kind + "\"");
  }
  if (c.backend.in_flight_cap < 1) throw ConfigError("in_flight_cap must be >= 1");
  if (c.backend.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (c.samples_per_strategy < 1) {
    throw ConfigError("samples_per_strategy must be >= 1");
  }
  if (SpecFor(c).population_size() < 2) {
    throw ConfigError("population size must be at least 2");
  }
  if (c.step_budget < 1) throw ConfigError("step_budget must be >= 1");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  evolution::GaParams ga = c.ga;
  ga.population_size = SpecFor(c).population_size();
  try {
    evolution::Validate(ga);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.program_path.empty()) throw ConfigError("no program given");
  if (!std::filesystem::is_regular_file(c.program_path)) {
    throw ConfigError("program file not found: " + c.program_path);
  }
}

std::shared_ptr<llm::Backend> MakeBackend(const BackendConfig& config) {
  if (config.kind == "mock") {
    llm::MockOptions options = config.mock;
    options.seed = config.seed.value_or(0);
    return std::make_shared<llm::MockBackend>(options);
  }
  const char* key = std::getenv(llm::kApiKeyEnv);
  if (key == nullptr || *key == '\0') {
    throw ConfigError(std::string("missing $") + llm::kApiKeyEnv);
  }
  llm::RemoteOptions options;
  options.endpoint = config.endpoint;
  options.model = config.model;
  options.api_key = key;
  std::shared_ptr<llm::HttpTransport> transport =
      llm::MakeHttpTransport(options.timeout_seconds);
  return std::make_shared<llm::RemoteBackend>(options, std::move(transport));
}

std::string LoadProgramSource(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("program file not found: " + path);
  }
  return genesis::PreprocessSource(ReadFile(path), FileName(path));
}

json FitnessJson(const suite::FitnessScore& s) {
  return {{"lcct", s.lcct}, {"bcct", s.bcct}, {"msct", s.msct},
          {"scalar", s.scalar}};
}

json MutantRecords(const std::string& program_file,
                   const std::vector<mutation::Mutant>& mutants) {
  json out = json::array();
  for (const auto& m : mutants) {
    json r = {{"id", m.mutant_id},
              {"operator", mutation::OperatorName(m.op)},
              {"function", m.site.function},
              {"site", program_file + ":" + std::to_string(m.site.loc.line)},
              {"path", m.site.ToString()},
              {"original", m.original_fragment},
              {"mutated", m.mutated_fragment},
              {"status", mutation::MutantStatusName(m.status)}};
    if (!m.killed_by.empty()) r["killed_by"] = m.killed_by;
    out.push_back(std::move(r));
  }
  return out;
}

GenResult Gen(const RunConfig& config, std::shared_ptr<llm::Backend> backend) {
  Prepared p = Prepare(config, std::move(backend));
  llm::Gateway gateway(p.backend, config.backend.in_flight_cap);
  genesis::GenesisContext ctx{p.program, p.source, gateway, config.step_budget,
                              config.backend.max_retries};
  GenResult result;
  result.suites = genesis::GenerateInitial(ctx, SpecFor(config),
                                           BackendSeed(config), config.workers);
  json suites = json::array();
  for (const auto& r : result.suites) {
    json j = PipelineJson(r);
    j["source"] = r.suite.Print();
    suites.push_back(std::move(j));
  }
  result.report = {{"schema_version", kReportSchemaVersion},
                   {"config", ConfigToJson(config)},
                   {"suites", suites},
                   {"stats", {{"llm_calls", gateway.call_count()}}}};
  return result;
}

RunResult Run(const RunConfig& config, std::shared_ptr<llm::Backend> backend,
              std::ostream* progress) {
  const auto start = std::chrono::steady_clock::now();
  Prepared p = Prepare(config, std::move(backend));
  llm::Gateway gateway(p.backend, config.backend.in_flight_cap);
  genesis::GenesisContext ctx{p.program, p.source, gateway, config.step_budget,
                              config.backend.max_retries};
  const genesis::PopulationSpec spec = SpecFor(config);

  RunResult result;
  json& report = result.report;
  report["schema_version"] = kReportSchemaVersion;
  report["config"] = ConfigToJson(config);
  json focal = json::array();
  for (const auto& fn : p.program.functions) {
    if (fn.is_focal) focal.push_back(fn.name);
  }
  evolution::FitnessEvaluator evaluator(p.program, config.step_budget);
  report["program"] = {
      {"path", config.program_path},
      {"fingerprint", Hex(evaluator.program_fingerprint())},
      {"focal_functions", focal},
      {"statements", p.program.StatementCount()},
      {"branches", p.program.BranchCount()},
      {"mutants", evaluator.mutant_count()}};

  auto stats = [&] {
    return json{{"llm_calls", gateway.call_count()},
                {"llm_failures", gateway.failure_count()},
                {"fitness_evaluations", evaluator.evaluations()},
                {"fitness_cache_hits", evaluator.cache_hits()},
                {"wall_clock_seconds",
                 std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count()}};
  };

  try {
    result.initial = genesis::GenerateInitial(ctx, spec, BackendSeed(config),
                                              config.workers);
    json initial = json::array();
    std::vector<suite::TestSuite> population;
    bool all_failed = true;
    for (const auto& r : result.initial) {
      const suite::FitnessScore score = evaluator.Evaluate(r.suite);
      result.initial_scores.push_back(score);
      json j = PipelineJson(r);
      j["fitness"] = FitnessJson(score);
      initial.push_back(std::move(j));
      population.push_back(r.suite);
      all_failed = all_failed && !r.error.empty();
    }
    report["initial_population"] = initial;
    if (all_failed) {
      throw std::runtime_error("every generation pipeline failed");
    }

    std::vector<evolution::Scored> scored;
    for (size_t i = 0; i < population.size(); ++i) {
      scored.push_back({population[i], result.initial_scores[i]});
    }
    const evolution::Scored best_initial =
        *std::min_element(scored.begin(), scored.end(), evolution::RanksBefore);
    result.best_initial_score = best_initial.score;

    json generations = json::array();
    if (config.disable_ga) {
      result.final_suite = best_initial.suite;
      report["evolution"] = {{"ran", false}};
    } else {
      evolution::GaParams ga = config.ga;
      ga.population_size = spec.population_size();
      ga.rng_seed = config.ga_seed.value_or(BackendSeed(config));
      ga.enable_mutation = !config.disable_mutation;
      evolution::MutationContext mctx{p.program, p.source, &gateway,
                                      config.step_budget,
                                      config.backend.max_retries};
      auto on_generation = [&](const evolution::GenerationRecord& rec) {
        if (progress != nullptr) {
          *progress << "generation " << rec.index << " best "
                    << rec.best.scalar << " mean " << rec.mean_scalar
                    << " elapsed " << rec.elapsed_seconds << "s\n";
        }
      };
      result.evolution = evolution::Evolve(population, mctx, ga, evaluator,
                                           on_generation);
      const evolution::EvolveResult& evo = *result.evolution;
      for (const auto& rec : evo.generations) {
        generations.push_back({{"index", rec.index},
                               {"best_suite_id", rec.best_suite_id},
                               {"best", FitnessJson(rec.best)},
                               {"mean_scalar", rec.mean_scalar},
                               {"population", rec.population},
                               {"elapsed_seconds", rec.elapsed_seconds}});
      }
      report["evolution"] = {
          {"ran", true},
          {"stop_reason", evo.stop_reason},
          {"early_exit", evo.early_exit},
          {"best_initial_reinjected", evo.best_initial_reinjected},
          {"mutation_attempts", evo.mutation_attempts},
          {"mutations_accepted", evo.mutations_accepted},
          {"final_population", evo.final_population.size()}};
      result.final_suite = evo.best.suite;
    }
    report["generations"] = generations;

    const evolution::FitnessDetail detail =
        evaluator.EvaluateDetailed(result.final_suite);
    result.final_score = detail.score;
    report["final"] = {{"suite_id", result.final_suite.suite_id},
                       {"provenance", result.final_suite.provenance},
                       {"size", SizeJson(suite::SizeOf(result.final_suite))},
                       {"fitness", FitnessJson(detail.score)},
                       {"best_initial_fitness",
                        FitnessJson(result.best_initial_score)},
                       {"source", result.final_suite.Print()}};
    report["mutants"] =
        MutantRecords(p.program.source_path, detail.mutation.mutants);
    if (!config.suite_output_path.empty()) {
      WriteFile(config.suite_output_path, result.final_suite.Print());
    }
  } catch (const std::exception& e) {
    spdlog::error("run failed: {}", e.what());
    report["error"] = e.what();
    result.exit_code = kExitRuntimeError;
  }
  result.llm_calls = gateway.call_count();
  report["stats"] = stats();
  if (!config.report_path.empty()) {
    WriteFile(config.report_path, report.dump(2) + "\n");
  }
  return result;
}

ScoreResult Score(const std::string& program_path, const std::string& suite_path,
                  int64_t step_budget) {
  const minilang::Program program =
      minilang::ParseProgram(ReadFile(program_path), FileName(program_path));
  const suite::TestSuite suite =
      suite::SplitMethods(ReadFile(suite_path), FileName(suite_path));
  const evolution::FitnessEvaluator evaluator(program, step_budget);
  return {evaluator.EvaluateDetailed(suite), suite::SizeOf(suite)};
}

std::vector<std::string> MutantListing(const std::string& program_path,
                                       bool focal_only) {
  const minilang::Program program =
      minilang::ParseProgram(ReadFile(program_path), FileName(program_path));
  std::vector<std::string> lines;
  for (const auto& m : mutation::EnumerateMutants(program, focal_only)) {
    lines.push_back(std::to_string(m.mutant_id) + " " +
                    std::string(mutation::OperatorName(m.op)) + " " +
                    program.source_path + ":" + std::to_string(m.site.loc.line) +
                    " " + m.original_fragment + " -> " + m.mutated_fragment);
  }
  return lines;
}

}  // namespace evotest::app
