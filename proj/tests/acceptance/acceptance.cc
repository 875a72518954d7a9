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

// Acceptance gate. Prints one line per criterion and exits non-zero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "evotest/app/app.h"
#include "evotest/evolution/evolution.h"
#include "evotest/genesis/genesis.h"
#include "evotest/llm/mock_backend.h"
#include "evotest/minilang/coverage.h"
#include "evotest/minilang/parser.h"
#include "evotest/mutation/mutation_engine.h"
#include "evotest/util/random.h"
#include "unit/test_util.h"

namespace evotest::acceptance {
namespace {

using minilang::RunStatus;
using suite::TestSuite;
namespace fixtures = evotest::testing;

struct Verdict {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// ------------------------------------------------------------- criterion 1

Verdict WeightedSum() {
  Verdict v;
  Rng rng(1);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double b = rng.UniformReal() * 100, l = rng.UniformReal() * 100,
                 m = rng.UniformReal() * 100;
    const double direct = 0.3 * b + 0.2 * l + 0.5 * m;
    worst = std::max(worst, std::abs(suite::FitnessScalar(b, l, m) - direct));
    worst = std::max(
        worst, std::abs(suite::FitnessScore::FromMetrics(l, b, m).scalar - direct));
  }
  v.Require(worst <= 1e-12, Fmt("max error %.3g", worst));
  v.Require(suite::FitnessScalar(50, 100, 80) == 75.0, "(50,100,80) != 75");
  v.detail = v.pass ? Fmt("max error %.3g over 1000 triples; (50,100,80)=%g",
                          worst, suite::FitnessScalar(50, 100, 80))
                    : v.detail;
  return v;
}

// ------------------------------------------------------------- criterion 2

Verdict MutationExpectation() {
  Verdict v;
  const auto program = minilang::ParseProgram(fixtures::ReadFixture("gcd", "program.mini"));
  llm::Gateway gateway(std::make_shared<llm::IdentityBackend>(), 1);
  evolution::MutationContext ctx{program, "", &gateway};
  std::string text;
  for (int i = 0; i < 5; ++i) {
    text += "test t" + std::to_string(i) + "() {\n  assert_eq(gcd(" +
            std::to_string(i + 2) + ", 2), 2);\n}\n";
  }
  const TestSuite s = suite::SplitMethods(text);
  Rng rng(2);
  const int trials = 10000;
  long total = 0;
  for (int i = 0; i < trials; ++i) {
    total += evolution::MutateSuite(ctx, s, rng, i).attempted;
  }
  const double mean = static_cast<double>(total) / trials;
  v.Require(std::abs(mean - 1.0) <= 0.05, Fmt("mean %.4f", mean));
  if (v.pass) v.detail = Fmt("mean mutated methods %.4f over 10000 trials", mean);
  return v;
}

// ------------------------------------------------------------- criterion 3

Verdict RankedSelection() {
  Verdict v;
  double worst = 0;
  for (int n : {3, 10, 25}) {
    std::vector<evolution::Scored> pool;
    for (int i = 0; i < n; ++i) {
      evolution::Scored s;
      s.suite.suite_id = "s" + std::to_string(i);
      s.score.scalar = i;  // pool[n-1] ranks first
      pool.push_back(s);
    }
    const auto p = evolution::RankProbabilities(n, 1.5);
    std::vector<long> hits(n, 0);
    Rng rng(3 + n);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      ++hits[evolution::RankedSelect(pool, 1.5, rng).first];
    }
    for (int r = 0; r < n; ++r) {
      const double observed = static_cast<double>(hits[n - 1 - r]) / draws;
      // Closed form, written out independently of RankProbabilities.
      const double expected =
          (1.0 / n) * (1.5 - (2 * 1.5 - 2) * r / static_cast<double>(n - 1));
      worst = std::max(worst, std::abs(observed - expected));
      v.Require(std::abs(p[r] - expected) < 1e-12, "closed form mismatch");
    }
  }
  v.Require(worst <= 0.01, Fmt("max deviation %.4f", worst));
  if (v.pass) v.detail = Fmt("max per-rank deviation %.4f (n=3,10,25)", worst);
  return v;
}

// ------------------------------------------------------------- criterion 4

TestSuite Named(const std::string& prefix, int n) {
  std::string text;
  for (int i = 0; i < n; ++i) {
    const std::string name = prefix + std::to_string(i);
    text += "test " + name + "() {\n  assert_eq(\"" + name + "\", \"" + name +
            "\");\n}\n";
  }
  return suite::SplitMethods(text);
}

std::pair<int, int> Origins(const TestSuite& s) {
  int a = 0, b = 0;
  for (const auto& m : s.methods) (m.name()[0] == 'a' ? a : b)++;
  return {a, b};
}

Verdict CrossoverProportions() {
  Verdict v;
  Rng rng(4);
  const TestSuite a10 = Named("a", 10), b10 = Named("b", 10);
  const TestSuite a3 = Named("a", 3), b5 = Named("b", 5);
  for (int i = 0; i < 1000; ++i) {
    const auto [o1, o2] = evolution::Crossover(a10, b10, rng);
    v.Require(Origins(o1) == std::make_pair(8, 2), "10x10 offspring A not 8+2");
    v.Require(Origins(o2) == std::make_pair(2, 8), "10x10 offspring B not 2+8");
    const auto [o3, o4] = evolution::Crossover(a3, b5, rng);
    v.Require(Origins(o3) == std::make_pair(2, 1), "3x5 offspring A not 2+1");
    v.Require(Origins(o4) == std::make_pair(1, 4), "3x5 offspring B not 1+4");
  }
  if (v.pass) v.detail = "1000 crossovers: 10x10 -> 8+2/2+8, 3x5 -> 2+1/1+4";
  return v;
}

// ------------------------------------------------------------- criterion 5

std::vector<const minilang::FunctionDecl*> HelperPtrs(const TestSuite& s) {
  std::vector<const minilang::FunctionDecl*> out;
  for (const auto& h : s.helpers) out.push_back(&h);
  return out;
}

Verdict MutationOracle() {
  Verdict v;
  int suites = 0;
  for (const auto& fixture : fixtures::FixtureNames()) {
    const auto program =
        minilang::ParseProgram(fixtures::ReadFixture(fixture, "program.mini"));
    v.Require(program.StatementCount() <= 20, fixture + " exceeds 20 statements");
    const auto manifest = fixtures::LoadManifest(fixture);
    for (const auto& [file, expected] : manifest["suites"].items()) {
      const TestSuite s = suite::SplitMethods(fixtures::ReadFixture(fixture, file));
      std::vector<std::string> passing;
      for (const auto& [name, o] : suite::RunSuite(program, s)) {
        if (o.status == RunStatus::kPass) passing.push_back(name);
      }
      // Engine route: short-circuits at the first failing test.
      const auto engine = mutation::ExecuteMutants(
          program, mutation::EnumerateMutants(program, true),
          suite::MakeHarness(s, passing));
      // Brute force: every passing test against every mutant.
      int killed = 0;
      const auto mutants = mutation::EnumerateMutants(program, true);
      for (const auto& m : mutants) {
        const auto mutated = mutation::ApplyMutant(program, m);
        const minilang::Interpreter interp(mutated, HelperPtrs(s), s.path);
        int failures = 0;
        for (const auto& name : passing) {
          const auto o = interp.RunMethod(s.FindMethod(name)->decl);
          failures += o.status != RunStatus::kPass;
        }
        killed += failures > 0;
      }
      const double brute =
          mutants.empty() ? 100.0 : 100.0 * killed / static_cast<double>(mutants.size());
      v.Require(engine.msct_percent == brute,
                fixture + "/" + file + Fmt(": engine %.6f vs brute force %.6f",
                                           engine.msct_percent, brute));
      // Third route: frozen result of the independent Python oracle.
      v.Require(std::abs(engine.msct_percent - expected["msct"].get<double>()) < 1e-9,
                fixture + "/" + file + " differs from oracle manifest");
      ++suites;
    }
  }
  if (v.pass) v.detail = std::to_string(suites) + " suites agree with both oracles";
  return v;
}

// ------------------------------------------------------------- criterion 6

class Tracer : public minilang::ExecutionObserver {
 public:
  void OnStatement(std::string_view function, const minilang::Stmt& stmt,
                   bool program_code) override {
    if (program_code) lines.emplace(std::string(function), stmt.loc.line);
  }
  void OnBranch(int branch_id, minilang::Arm arm) override {
    arms.emplace(branch_id, arm);
  }
  std::set<std::pair<std::string, int>> lines;
  std::set<std::pair<int, minilang::Arm>> arms;
};

Verdict CoverageOracle() {
  Verdict v;
  int suites = 0;
  for (const auto& fixture : fixtures::FixtureNames()) {
    const auto program =
        minilang::ParseProgram(fixtures::ReadFixture(fixture, "program.mini"));
    const auto manifest = fixtures::LoadManifest(fixture);
    for (const auto& [file, expected] : manifest["suites"].items()) {
      const TestSuite s = suite::SplitMethods(fixtures::ReadFixture(fixture, file));
      const minilang::Interpreter interp(program, HelperPtrs(s), s.path);
      std::vector<minilang::CoverageReport> reports{minilang::EmptyCoverage(program)};
      Tracer traced;
      std::set<std::pair<std::string, int>> oracle_lines;
      std::set<std::tuple<std::string, int, std::string>> oracle_arms, merged_arms;
      for (const auto& m : s.methods) {
        const auto o = interp.RunMethod(m.decl);
        if (o.status != RunStatus::kPass) continue;
        reports.push_back(o.coverage);
        interp.RunMethod(m.decl, minilang::kDefaultStepBudget, &traced);
        const auto& per_test = expected["per_test"][m.name()];
        for (const auto& l : per_test["lines"]) {
          oracle_lines.emplace(l[0].get<std::string>(), l[1].get<int>());
        }
        for (const auto& a : per_test["arms"]) {
          oracle_arms.emplace(a[0].get<std::string>(), a[1].get<int>(),
                              a[2].get<std::string>());
        }
      }
      const auto merged = minilang::MergeCoverage(reports);
      for (const auto& [id, arm] : merged.branch_outcomes) {
        const auto& info = program.branch_index.at(id);
        merged_arms.emplace(info.function, info.line, minilang::ArmName(arm));
      }
      const std::string where = fixture + "/" + file;
      v.Require(merged.executed_lines == traced.lines, where + ": lines vs tracer");
      v.Require(merged.branch_outcomes == traced.arms, where + ": arms vs tracer");
      v.Require(merged.executed_lines == oracle_lines, where + ": lines vs oracle");
      v.Require(merged_arms == oracle_arms, where + ": arms vs oracle");
      ++suites;
    }
  }
  if (v.pass) v.detail = std::to_string(suites) + " merged reports equal both tracing unions";
  return v;
}

// ------------------------------------------------------------- criterion 7

struct Setup {
  std::string source;
  minilang::Program program;
  llm::Gateway gateway;

  Setup(const std::string& fixture, llm::MockOptions options)
      : source(genesis::PreprocessSource(fixtures::ReadFixture(fixture, "program.mini"))),
        program(minilang::ParseProgram(source)),
        gateway(std::make_shared<llm::MockBackend>(options), 4) {}
};

Verdict Monotonicity() {
  Verdict v;
  int runs = 0, exits = 0;
  for (const char* fixture : {"triangle", "gcd"}) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      Setup env(fixture, llm::MockOptions{seed});
      genesis::GenesisContext g{env.program, env.source, env.gateway};
      std::vector<TestSuite> initial;
      for (auto& r : genesis::GenerateInitial(g, genesis::MakePopulationSpec(5), seed)) {
        initial.push_back(std::move(r.suite));
      }
      evolution::GaParams params;
      params.rng_seed = seed;
      params.time_budget_seconds = 30;
      evolution::FitnessEvaluator evaluator(env.program);
      const auto result = evolution::Evolve(
          initial, {env.program, env.source, &env.gateway}, params, evaluator);
      const std::string where = std::string(fixture) + " seed " + std::to_string(seed);
      double prev = -1;
      for (size_t i = 0; i < result.generations.size(); ++i) {
        const double best = result.generations[i].best.scalar;
        v.Require(best >= prev, where + ": best decreased");
        prev = best;
        if (best >= 100.0) {
          v.Require(i + 1 == result.generations.size() && result.early_exit,
                    where + ": no early exit after a perfect suite");
        }
      }
      v.Require(result.best.score.scalar >= 100.0 || !result.early_exit,
                where + ": early exit without a perfect suite");
      exits += result.early_exit;
      ++runs;
    }
  }
  if (v.pass) {
    v.detail = std::to_string(runs) + " runs monotone; " + std::to_string(exits) +
               " early exits, all on perfect suites";
  }
  return v;
}

// ------------------------------------------------------------- criterion 8

Verdict RepairBound() {
  Verdict v;
  llm::MockOptions options;
  options.malformed_rate = 1.0;
  options.repair_success_rate = 0.0;
  int states = 0;
  for (const auto& fixture : fixtures::FixtureNames()) {
    options.seed = 8;
    Setup env(fixture, options);
    genesis::GenesisContext g{env.program, env.source, env.gateway};
    for (const auto& r : genesis::GenerateInitial(g, genesis::MakePopulationSpec(5), 8)) {
      const std::string where = fixture + " " + r.suite.provenance;
      v.Require(r.generation_repair.round == genesis::kMaxRepairRounds,
                where + ": generation round " +
                    std::to_string(r.generation_repair.round));
      ++states;
      if (!r.enhancement_skipped) {
        v.Require(r.enhancement_repair.round == genesis::kMaxRepairRounds,
                  where + ": enhancement round " +
                      std::to_string(r.enhancement_repair.round));
        ++states;
      }
      for (const auto& [name, o] : suite::RunSuite(env.program, r.suite)) {
        v.Require(o.status == RunStatus::kPass, where + ": " + name + " fails");
      }
    }
  }
  if (v.pass) v.detail = std::to_string(states) + " repair states closed at round 4";
  return v;
}

// ------------------------------------------------------ criteria 9, 10, 11

// Generations per run for the trend criteria. A fixed count keeps the
// results independent of machine speed.
constexpr int kTrendGenerations = 40;

app::RunConfig TrendConfig(const std::string& fixture, uint64_t seed, int samples) {
  app::RunConfig c;
  c.program_path = fixtures::FixturePath(fixture, "program.mini");
  c.backend.seed = seed;
  c.samples_per_strategy = samples;
  c.ga.max_generations = kTrendGenerations;
  c.ga.time_budget_seconds = 300;
  return c;
}

double FinalScalar(const app::RunConfig& c) {
  const app::RunResult r = app::Run(c);
  if (r.exit_code != app::kExitOk) throw std::runtime_error(r.report.dump());
  return r.final_score.scalar;
}

Verdict AblationTrend() {
  Verdict v;
  double full = 0, no_mutation = 0, no_ga = 0;
  int n = 0;
  for (const auto& fixture : fixtures::FixtureNames()) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      app::RunConfig c = TrendConfig(fixture, seed, 5);
      full += FinalScalar(c);
      c.disable_mutation = true;
      no_mutation += FinalScalar(c);
      c.disable_mutation = false;
      c.disable_ga = true;
      no_ga += FinalScalar(c);
      ++n;
    }
  }
  full /= n;
  no_mutation /= n;
  no_ga /= n;
  v.Require(full >= no_mutation, "full < without mutation");
  v.Require(no_mutation >= no_ga, "without mutation < without GA");
  v.Require(full - no_ga >= 2.0, "full - without GA < 2");
  v.detail = Fmt("full %.3f, w/o mutation %.3f, w/o GA %.3f", full, no_mutation, no_ga) +
             (v.pass ? "" : " (" + v.detail + ")");
  return v;
}

Verdict PopulationTrend() {
  Verdict v;
  std::vector<double> means;
  for (int samples : {2, 3, 4, 5, 6}) {
    double sum = 0;
    int n = 0;
    for (const auto& fixture : fixtures::FixtureNames()) {
      for (uint64_t seed = 1; seed <= 3; ++seed) {
        sum += FinalScalar(TrendConfig(fixture, seed, samples));
        ++n;
      }
    }
    means.push_back(sum / n);
  }
  // Sizes 10, 15, 20, 25 are indices 0..3.
  for (size_t i = 1; i < 4; ++i) {
    v.Require(means[i] >= means[i - 1] - 1.0,
              "drop beyond band at size " + std::to_string(5 * (i + 2)));
  }
  std::string summary = "means";
  for (size_t i = 0; i < means.size(); ++i) {
    summary += Fmt(" %g:%.3f", 5.0 * (i + 2), means[i]);
  }
  v.detail = summary + (v.pass ? "" : " (" + v.detail + ")");
  return v;
}

Verdict Reproducibility() {
  Verdict v;
  for (const char* fixture : {"triangle", "string_scan"}) {
    app::RunConfig c = TrendConfig(fixture, 11, 5);
    const app::RunResult a = app::Run(c);
    const app::RunResult b = app::Run(c);
    v.Require(a.final_suite.Print() == b.final_suite.Print(),
              std::string(fixture) + ": final suites differ");
    v.Require(a.final_score == b.final_score,
              std::string(fixture) + ": fitness triples differ");
  }
  if (v.pass) v.detail = "identical final suites and triples on 2 fixtures";
  return v;
}

struct Criterion {
  int number;
  double limit_seconds;
  std::function<Verdict()> check;
};

}  // namespace
}  // namespace evotest::acceptance

int main(int argc, char** argv) {
  using namespace evotest::acceptance;
  CLI::App cli{"Acceptance criteria"};
  std::vector<int> only;
  cli.add_option("--only", only, "Criterion numbers to run");
  CLI11_PARSE(cli, argc, argv);
  spdlog::set_level(spdlog::level::err);

  const std::vector<Criterion> criteria = {
      {1, 1, WeightedSum},          {2, 10, MutationExpectation},
      {3, 5, RankedSelection},      {4, 5, CrossoverProportions},
      {5, 30, MutationOracle},      {6, 10, CoverageOracle},
      {7, 15 * 60, Monotonicity},   {8, 30, RepairBound},
      {9, 60 * 60, AblationTrend},  {10, 90 * 60, PopulationTrend},
      {11, 5 * 60, Reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.number) == only.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.limit_seconds) {
      v.pass = false;
      v.detail += Fmt(" (over the %.0fs limit)", c.limit_seconds);
    }
    std::printf("criterion %d: %s  %s  [%.2fs]\n", c.number, v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
