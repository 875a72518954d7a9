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

#include "evotest/evolution/evolution.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "evotest/llm/agents.h"
#include "evotest/llm/prompts.h"
#include "evotest/minilang/parser.h"
#include "evotest/minilang/printer.h"
#include "evotest/util/hash.h"

namespace evotest::evolution {
namespace {

using minilang::FunctionDecl;
using minilang::Program;
using minilang::RunStatus;
using suite::FitnessScore;
using suite::TestSuite;

bool IsPerfect(const Scored& s, const GaParams& params) {
  return s.score.scalar >= params.perfect_fitness;
}

const Scored& BestOf(const std::vector<Scored>& pool) {
  return *std::min_element(pool.begin(), pool.end(), RanksBefore);
}

double MeanScalar(const std::vector<Scored>& pool) {
  if (pool.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : pool) sum += s.score.scalar;
  return sum / static_cast<double>(pool.size());
}

size_t SampleIndex(const std::vector<double>& probabilities, Rng& rng) {
  const double u = rng.UniformReal();
  double acc = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return i;
  }
  return probabilities.size() - 1;
}

bool IsSubsequence(const std::vector<minilang::Stmt>& small,
                   const std::vector<minilang::Stmt>& big) {
  size_t i = 0;
  for (const auto& stmt : big) {
    if (i < small.size() && minilang::SameShape(small[i], stmt)) ++i;
  }
  return i == small.size();
}

}  // namespace

void Validate(const GaParams& params) {
  if (params.crossover_probability < 0.0 ||
      params.crossover_probability > 1.0) {
    throw std::invalid_argument("crossover_probability must be in [0, 1]");
  }
  if (params.selection_pressure < 1.0 || params.selection_pressure > 2.0) {
    throw std::invalid_argument("selection_pressure must be in [1, 2]");
  }
  if (params.population_size < 2) {
    throw std::invalid_argument("population_size must be at least 2");
  }
  if (params.time_budget_seconds < 0.0) {
    throw std::invalid_argument("time_budget_seconds must not be negative");
  }
  if (params.max_generations && *params.max_generations < 0) {
    throw std::invalid_argument("max_generations must not be negative");
  }
}

FitnessEvaluator::FitnessEvaluator(const Program& program, int64_t step_budget,
                                   int mutant_workers)
    : program_(program),
      step_budget_(step_budget),
      mutant_workers_(mutant_workers),
      fingerprint_(minilang::ProgramFingerprint(program)),
      compiled_(mutation::CompileMutants(
          program, mutation::EnumerateMutants(program, /*focal_only=*/true))) {}

FitnessDetail FitnessEvaluator::EvaluateDetailed(const TestSuite& suite) const {
  FitnessDetail detail;
  std::vector<minilang::CoverageReport> reports{
      minilang::EmptyCoverage(program_)};
  const auto outcomes = suite::RunSuite(program_, suite, step_budget_);
  for (const auto& m : suite.methods) {
    const auto& outcome = outcomes.at(m.name());
    if (outcome.status != RunStatus::kPass) continue;
    detail.passing.push_back(m.name());
    reports.push_back(outcome.coverage);
  }
  detail.coverage =
      minilang::Summarize(program_, minilang::MergeCoverage(reports));
  detail.mutation =
      mutation::ExecuteCompiled(compiled_, suite::MakeHarness(suite, detail.passing),
                                step_budget_, mutant_workers_);
  detail.score = FitnessScore::FromMetrics(detail.coverage.LinePercent(),
                                           detail.coverage.BranchPercent(),
                                           detail.mutation.msct_percent);
  return detail;
}

FitnessScore FitnessEvaluator::Evaluate(const TestSuite& suite) {
  const uint64_t key = suite.FitnessKey(fingerprint_);
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++cache_hits_;
      return it->second;
    }
  }
  const FitnessScore score = EvaluateDetailed(suite).score;
  std::lock_guard lock(mu_);
  ++evaluations_;
  cache_.emplace(key, score);
  return score;
}

int64_t FitnessEvaluator::evaluations() const {
  std::lock_guard lock(mu_);
  return evaluations_;
}

int64_t FitnessEvaluator::cache_hits() const {
  std::lock_guard lock(mu_);
  return cache_hits_;
}

FitnessScore EvaluateFitness(const Program& program, const TestSuite& suite,
                             int64_t step_budget) {
  return FitnessEvaluator(program, step_budget).EvaluateDetailed(suite).score;
}

bool RanksBefore(const Scored& a, const Scored& b) {
  if (a.score.scalar != b.score.scalar) return a.score.scalar > b.score.scalar;
  const suite::SuiteSize sa = suite::SizeOf(a.suite);
  const suite::SuiteSize sb = suite::SizeOf(b.suite);
  if (sa != sb) return sa < sb;
  return a.suite.suite_id < b.suite.suite_id;
}

std::vector<double> RankProbabilities(int n, double pressure) {
  if (n < 2) throw std::invalid_argument("ranked selection needs n >= 2");
  if (pressure < 1.0 || pressure > 2.0) {
    throw std::invalid_argument("selection pressure must be in [1, 2]");
  }
  std::vector<double> p(n);
  for (int r = 1; r <= n; ++r) {
    p[r - 1] = (pressure - (2.0 * pressure - 2.0) * (r - 1) / (n - 1)) / n;
  }
  return p;
}

std::pair<size_t, size_t> RankedSelect(const std::vector<Scored>& pool,
                                       double pressure, Rng& rng) {
  if (pool.size() < 2) {
    throw std::invalid_argument("ranked selection needs at least 2 suites");
  }
  std::vector<size_t> order(pool.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return RanksBefore(pool[a], pool[b]);
  });
  const auto p = RankProbabilities(static_cast<int>(pool.size()), pressure);
  const size_t first = SampleIndex(p, rng);
  size_t second = SampleIndex(p, rng);
  if (second == first) second = SampleIndex(p, rng);
  return {order[first], order[second]};
}

std::pair<TestSuite, TestSuite> Crossover(const TestSuite& p1,
                                          const TestSuite& p2, Rng& rng) {
  const size_t n1 = p1.methods.size();
  const size_t n2 = p2.methods.size();
  const auto take1 = static_cast<size_t>(std::lround(0.8 * n1));
  const auto take2 = static_cast<size_t>(std::lround(0.2 * n2));
  const std::vector<size_t> a1 = rng.SampleIndices(n1, take1);
  const std::vector<size_t> a2 = rng.SampleIndices(n2, take2);
  auto complement = [](size_t n, const std::vector<size_t>& chosen) {
    std::vector<size_t> rest;
    for (size_t i = 0; i < n; ++i) {
      if (!std::binary_search(chosen.begin(), chosen.end(), i)) rest.push_back(i);
    }
    return rest;
  };
  TestSuite a = suite::MergeSuites(suite::SelectMethods(p1, a1),
                                   suite::SelectMethods(p2, a2));
  TestSuite b = suite::MergeSuites(suite::SelectMethods(p1, complement(n1, a1)),
                                   suite::SelectMethods(p2, complement(n2, a2)));
  a.provenance = "crossover";
  b.provenance = "crossover";
  a.fitness_cache.reset();
  b.fitness_cache.reset();
  return {std::move(a), std::move(b)};
}

bool AcceptMutatedMethod(const Program& program, const TestSuite& suite,
                         const FunctionDecl& original,
                         const FunctionDecl& mutated, int64_t step_budget) {
  if (!IsSubsequence(original.body, mutated.body)) return false;
  const int added =
      suite::CountAssertions(mutated.body) - suite::CountAssertions(original.body);
  if (added < 1 || added > 5) return false;
  std::vector<const FunctionDecl*> helpers;
  for (const auto& h : suite.helpers) helpers.push_back(&h);
  const minilang::Interpreter interp(program, std::move(helpers), suite.path);
  return interp.RunMethod(mutated, step_budget).status == RunStatus::kPass;
}

MutateOutcome MutateSuite(const MutationContext& ctx, const TestSuite& suite,
                          Rng& rng, uint64_t request_seed) {
  MutateOutcome out;
  out.suite = suite;
  const size_t n = suite.methods.size();
  if (n == 0) return out;
  const double p = 1.0 / static_cast<double>(n);
  bool changed = false;
  for (size_t i = 0; i < n; ++i) {
    if (!rng.Bernoulli(p)) continue;
    ++out.attempted;
    if (ctx.gateway == nullptr) continue;
    const suite::TestMethod& method = suite.methods[i];
    std::string helpers;
    for (const auto& name : suite::HelperClosure(suite, method.decl)) {
      if (!helpers.empty()) helpers += "\n";
      helpers += minilang::PrintFunction(*suite.FindHelper(name));
    }
    try {
      const llm::RenderedPrompt prompt = llm::RenderPrompt(
          llm::TemplateId::kMutator,
          {{"test_method", minilang::PrintFunction(method.decl)},
           {"source_code", ctx.source},
           {"helpers", helpers}});
      llm::CompletionRequest req;
      req.template_id = std::string(llm::TemplateName(llm::TemplateId::kMutator));
      req.system_prompt = prompt.system;
      req.user_content = prompt.user;
      req.temperature = llm::kMutatorTemperature;
      req.max_retries = ctx.max_retries;
      req.seed = MixSeeds(request_seed, static_cast<uint64_t>(i));
      const std::string reply = ctx.gateway->Complete(req).text;
      const minilang::TestFile file =
          minilang::ParseTestFile(llm::ExtractCode(reply), suite.path);
      auto it = std::find_if(file.functions.begin(), file.functions.end(),
                             [](const FunctionDecl& f) { return f.is_test; });
      if (it == file.functions.end()) continue;
      FunctionDecl mutated = *it;
      mutated.name = method.decl.name;
      if (!AcceptMutatedMethod(ctx.program, suite, method.decl, mutated,
                               ctx.step_budget)) {
        spdlog::debug("mutation of {} rejected", method.name());
        continue;
      }
      suite::TestMethod& target = out.suite.methods[i];
      target.decl = std::move(mutated);
      target.assertion_count = suite::CountAssertions(target.decl.body);
      ++out.accepted;
      changed = true;
    } catch (const minilang::ParseError&) {
      spdlog::debug("mutation reply for {} did not parse", method.name());
    } catch (const std::exception& e) {
      spdlog::warn("mutation request failed, keeping {}: {}", method.name(),
                   e.what());
    }
  }
  if (changed) {
    out.suite = suite::Normalize(out.suite);
    out.suite.provenance = "mutated";
    out.suite.fitness_cache.reset();
  }
  return out;
}

bool AcceptOffspring(const Scored& p1, const Scored& p2, const Scored& o1,
                     const Scored& o2) {
  const double best_parent = std::max(p1.score.scalar, p2.score.scalar);
  const double best_child = std::max(o1.score.scalar, o2.score.scalar);
  if (best_child != best_parent) return best_child > best_parent;
  return suite::SizeOf(o1.suite) + suite::SizeOf(o2.suite) <=
         suite::SizeOf(p1.suite) + suite::SizeOf(p2.suite);
}

EvolveResult Evolve(std::vector<TestSuite> initial, const MutationContext& ctx,
                    const GaParams& params, FitnessEvaluator& evaluator,
                    const GenerationCallback& on_generation) {
  Validate(params);
  if (static_cast<int>(initial.size()) != params.population_size) {
    throw std::invalid_argument("initial population size does not match");
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  const auto n = static_cast<size_t>(params.population_size);

  Rng rng(params.rng_seed);
  EvolveResult result;
  int next_id = 0;
  auto score = [&](TestSuite s) {
    Scored out{std::move(s), {}};
    out.score = evaluator.Evaluate(out.suite);
    return out;
  };

  std::vector<Scored> population;
  for (size_t i = 0; i < initial.size(); ++i) {
    if (initial[i].suite_id.empty()) {
      initial[i].suite_id = "init-" + std::to_string(i);
    }
    population.push_back(score(std::move(initial[i])));
  }
  result.best_initial = BestOf(population);

  auto finish = [&](std::vector<Scored> pool, std::string reason) {
    result.stop_reason = std::move(reason);
    result.best = BestOf(pool);
    result.final_population = std::move(pool);
    return result;
  };
  auto record = [&](int index, const std::vector<Scored>& pool) {
    const Scored& best = BestOf(pool);
    GenerationRecord rec{index, best.suite.suite_id, best.score,
                         MeanScalar(pool), elapsed(),
                         static_cast<int>(pool.size())};
    result.generations.push_back(rec);
    if (on_generation) on_generation(rec);
  };

  record(0, population);
  if (IsPerfect(BestOf(population), params)) {
    result.early_exit = true;
    return finish(std::move(population), "perfect");
  }

  int generation = 0;
  std::string stop = "time_budget";
  while (elapsed() < params.time_budget_seconds) {
    if (params.max_generations && generation >= *params.max_generations) {
      stop = "max_generations";
      break;
    }
    ++generation;
    std::vector<Scored> elite;
    bool out_of_time = false;
    // Adds `s` if there is room; true when it is a perfect suite.
    auto admit = [&](const Scored& s) {
      if (elite.size() >= n) return false;
      elite.push_back(s);
      return IsPerfect(s, params);
    };

    while (elite.size() < n) {
      if (elapsed() >= params.time_budget_seconds) {
        out_of_time = true;
        break;
      }
      const auto [i1, i2] =
          RankedSelect(population, params.selection_pressure, rng);
      const Scored& p1 = population[i1];
      const Scored& p2 = population[i2];
      TestSuite c1 = p1.suite;
      TestSuite c2 = p2.suite;
      if (rng.Bernoulli(params.crossover_probability)) {
        std::tie(c1, c2) = Crossover(p1.suite, p2.suite, rng);
      }
      if (params.enable_mutation) {
        for (TestSuite* c : {&c1, &c2}) {
          MutateOutcome m =
              MutateSuite(ctx, *c, rng, MixSeeds(params.rng_seed, next_id));
          result.mutation_attempts += m.attempted;
          result.mutations_accepted += m.accepted;
          *c = std::move(m.suite);
        }
      }
      c1.suite_id = "g" + std::to_string(generation) + "-" + std::to_string(next_id++);
      c2.suite_id = "g" + std::to_string(generation) + "-" + std::to_string(next_id++);
      Scored o1 = score(std::move(c1));
      Scored o2 = score(std::move(c2));

      const bool accept = AcceptOffspring(p1, p2, o1, o2);
      const Scored& a = accept ? o1 : p1;
      const Scored& b = accept ? o2 : p2;
      const bool a_first = RanksBefore(a, b) || !RanksBefore(b, a);
      const Scored first = a_first ? a : b;
      const Scored second = a_first ? b : a;
      if (admit(first) || admit(second)) {
        result.early_exit = true;
        record(generation, elite);
        return finish(std::move(elite), "perfect");
      }
    }

    if (out_of_time) {
      // Close the generation with the best current members.
      std::vector<Scored> ranked = population;
      std::sort(ranked.begin(), ranked.end(), RanksBefore);
      for (const auto& s : ranked) {
        if (elite.size() >= n) break;
        elite.push_back(s);
      }
    }

    // Keep the population's best if the pool would otherwise lose it.
    const Scored& prev_best = BestOf(population);
    if (prev_best.score.scalar > BestOf(elite).score.scalar) {
      auto worst = std::max_element(elite.begin(), elite.end(), RanksBefore);
      *worst = prev_best;
    }
    population = std::move(elite);
    record(generation, population);
    if (out_of_time) break;
  }

  if (params.max_generations && generation >= *params.max_generations) {
    stop = "max_generations";
  }
  const uint64_t initial_hash = result.best_initial.suite.ContentHash();
  const bool present = std::any_of(
      population.begin(), population.end(),
      [&](const Scored& s) { return s.suite.ContentHash() == initial_hash; });
  if (!present) {
    population.push_back(result.best_initial);
    result.best_initial_reinjected = true;
  }
  return finish(std::move(population), stop);
}

}  // namespace evotest::evolution
