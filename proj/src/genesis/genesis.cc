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

#include "evotest/genesis/genesis.h"

#include <algorithm>
#include <future>
#include <set>
#include <sstream>
#include <utility>

#include <spdlog/spdlog.h>

#include "evotest/llm/prompts.h"
#include "evotest/minilang/coverage.h"
#include "evotest/minilang/parser.h"
#include "evotest/minilang/printer.h"
#include "evotest/util/hash.h"
#include "evotest/util/strings.h"

namespace evotest::genesis {
namespace {

using minilang::Expr;
using minilang::FunctionDecl;
using minilang::Program;
using minilang::RunOutcome;
using minilang::RunStatus;
using minilang::Stmt;
using suite::TestSuite;

// Seed salts for the model calls of one pipeline.
constexpr uint64_t kGenerateSalt = 1;
constexpr uint64_t kRepairSalt = 2;
constexpr uint64_t kEnhanceSalt = 3;
constexpr uint64_t kEnhanceRepairSalt = 4;

void DropDeadCode(std::vector<Stmt>& block) {
  auto ret = std::find_if(block.begin(), block.end(), [](const Stmt& s) {
    return s.kind == Stmt::Kind::kReturn;
  });
  if (ret != block.end()) block.erase(ret + 1, block.end());
  for (auto& stmt : block) {
    DropDeadCode(stmt.body);
    DropDeadCode(stmt.else_body);
  }
}

void ReadsOf(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::kIdent) out.insert(e.text);
  for (const auto& op : e.operands) ReadsOf(op, out);
}

void ReadsOf(const Stmt& stmt, std::set<std::string>& out) {
  if (stmt.expr) ReadsOf(*stmt.expr, out);
  for (const auto& s : stmt.body) ReadsOf(s, out);
  for (const auto& s : stmt.else_body) ReadsOf(s, out);
}

void DefinesOf(const Stmt& stmt, std::set<std::string>& out) {
  if (stmt.kind == Stmt::Kind::kLet || stmt.kind == Stmt::Kind::kAssign) {
    out.insert(stmt.name);
  }
  for (const auto& s : stmt.body) DefinesOf(s, out);
  for (const auto& s : stmt.else_body) DefinesOf(s, out);
}

std::string Location(const std::string& method, minilang::SourceLoc loc) {
  return method + ":" + std::to_string(loc.line) + ":" +
         std::to_string(loc.column);
}

// Index of the top-level statement of `body` that contains `line`.
std::optional<size_t> TopLevelIndex(const std::vector<Stmt>& body, int line) {
  std::optional<size_t> found;
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i].loc.line <= line) found = i;
  }
  return found;
}

// Applies at most one fix to `method`; returns true if it changed.
bool FixMethod(const Program& program, FunctionDecl& method,
               const RunOutcome& outcome, RepairState& state) {
  if (outcome.frames.empty()) return false;
  const minilang::StackFrame& top = outcome.frames.front();
  if (!top.in_test_file || top.function != method.name) return false;

  if (outcome.error_kind == minilang::ErrorKind::kUndefinedFunction) {
    for (const auto& fn : program.functions) {
      if (EditDistance(fn.name, outcome.undefined_name) == 1) {
        suite::RenameCalls(method.body, outcome.undefined_name, fn.name);
        state.fixes_applied.push_back(
            {FixKind::kIdentifierStubbed, Location(method.name, top.loc)});
        return true;
      }
    }
  }

  const auto index = TopLevelIndex(method.body, top.loc.line);
  if (!index) return false;
  std::set<std::string> tainted;
  DefinesOf(method.body[*index], tainted);
  std::vector<Stmt> kept(method.body.begin(), method.body.begin() + *index);
  for (size_t j = *index + 1; j < method.body.size(); ++j) {
    std::set<std::string> reads;
    ReadsOf(method.body[j], reads);
    const bool depends = std::any_of(reads.begin(), reads.end(),
                                     [&](const std::string& name) {
                                       return tainted.contains(name);
                                     });
    if (depends) {
      DefinesOf(method.body[j], tainted);
    } else {
      kept.push_back(method.body[j]);
    }
  }
  method.body = std::move(kept);
  state.fixes_applied.push_back(
      {FixKind::kStatementRemoved, Location(method.name, top.loc)});
  return true;
}

bool AllPass(const std::map<std::string, RunOutcome>& outcomes) {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& kv) {
    return kv.second.status == RunStatus::kPass;
  });
}

llm::CompletionRequest Request(const GenesisContext& ctx,
                               llm::TemplateId id,
                               const llm::RenderedPrompt& prompt,
                               double temperature, uint64_t seed) {
  llm::CompletionRequest req;
  req.template_id = std::string(llm::TemplateName(id));
  req.system_prompt = prompt.system;
  req.user_content = prompt.user;
  req.temperature = temperature;
  req.max_retries = ctx.max_retries;
  req.seed = seed;
  return req;
}

// A suite under repair: parsed, or raw text with its parse error.
struct Candidate {
  std::optional<TestSuite> suite;
  std::string raw;
  std::string parse_trace;
};

Candidate ParseCandidate(std::string_view reply) {
  Candidate c;
  c.raw = llm::ExtractCode(reply);
  try {
    c.suite = suite::SplitMethods(c.raw);
  } catch (const minilang::ParseError& e) {
    c.parse_trace = e.Trace();
  }
  return c;
}

RepairResult RunRepair(const GenesisContext& ctx,
                       const llm::AgentConfig& agent, Candidate current,
                       uint64_t seed) {
  RepairResult result;
  RepairState& state = result.state;
  std::map<std::string, RunOutcome> outcomes;
  for (;;) {
    std::string trace;
    std::string text;
    if (current.suite) {
      outcomes = ApplyProgrammaticFixes(ctx.program, *current.suite, state,
                                        ctx.step_budget);
      if (AllPass(outcomes)) break;
      trace = FailureTraces(*current.suite, outcomes);
      text = current.suite->Print();
    } else {
      trace = current.parse_trace;
      text = current.raw;
    }
    state.last_trace = trace;
    if (state.round >= kMaxRepairRounds) break;

    const llm::RenderedPrompt repair = llm::RenderPrompt(
        llm::TemplateId::kRepair, {{"stacktrace", trace},
                                   {"test_suite", text.empty() ? "\n" : text},
                                   {"source_code", ctx.source}});
    llm::RenderedPrompt prompt{
        std::string(llm::GetTemplate(agent.system_prompt).system),
        repair.user};
    ++state.round;
    state.fixes_applied.push_back(
        {FixKind::kLlmRepair, "round " + std::to_string(state.round)});
    try {
      const llm::CompletionResponse reply = ctx.gateway.Complete(
          Request(ctx, llm::TemplateId::kRepair, prompt, agent.temperature,
                  MixSeeds(seed, static_cast<uint64_t>(state.round))));
      Candidate next = ParseCandidate(reply.text);
      if (next.suite) {
        current = std::move(next);
      } else if (!current.suite) {
        current = std::move(next);
      } else {
        spdlog::debug("repair reply did not parse: {}", next.parse_trace);
      }
    } catch (const std::exception& e) {
      spdlog::warn("repair request failed: {}", e.what());
    }
  }
  if (current.suite) {
    result.suite = suite::PruneFailing(*current.suite, outcomes);
  }
  return result;
}

}  // namespace

std::string PreprocessSource(std::string_view source, const std::string& path) {
  Program program = minilang::ParseProgram(source, path);
  for (auto& fn : program.functions) DropDeadCode(fn.body);
  return minilang::PrintProgram(program);
}

PopulationSpec MakePopulationSpec(int samples_per_strategy,
                                  bool temperature_diversity) {
  PopulationSpec spec;
  spec.samples_per_strategy = samples_per_strategy;
  if (!temperature_diversity) {
    const llm::AgentConfig& base = llm::DefaultAgents().front();
    for (auto& agent : spec.strategies) {
      agent.temperature = base.temperature;
      agent.system_prompt = base.system_prompt;
      agent.purpose = base.purpose;
    }
  }
  return spec;
}

std::string_view FixKindName(FixKind kind) {
  switch (kind) {
    case FixKind::kStatementRemoved:
      return "statement_removed";
    case FixKind::kIdentifierStubbed:
      return "identifier_stubbed";
    case FixKind::kLlmRepair:
      return "llm_repair";
  }
  return "?";
}

std::string FocalSignatures(const Program& program) {
  std::string out;
  for (const auto& fn : program.functions) {
    if (!fn.is_focal) continue;
    out += fn.name + "(" + Join(fn.params, ", ") + ")\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string FailureTraces(const TestSuite& suite,
                          const std::map<std::string, RunOutcome>& outcomes) {
  std::vector<std::string> traces;
  for (const auto& m : suite.methods) {
    auto it = outcomes.find(m.name());
    if (it != outcomes.end() && it->second.status != RunStatus::kPass) {
      traces.push_back(it->second.trace);
    }
  }
  return Join(traces, "\n\n");
}

std::map<std::string, RunOutcome> ApplyProgrammaticFixes(
    const Program& program, TestSuite& suite, RepairState& state,
    int64_t step_budget) {
  // Each pass removes a statement or an undefined name, so this terminates;
  // the cap is a guard.
  for (int pass = 0; pass < 1000; ++pass) {
    suite = suite::Normalize(suite);
    auto outcomes = suite::RunSuite(program, suite, step_budget);
    if (AllPass(outcomes)) return outcomes;
    bool changed = false;
    for (auto& m : suite.methods) {
      const RunOutcome& o = outcomes.at(m.name());
      if (o.status == RunStatus::kPass) continue;
      changed |= FixMethod(program, m.decl, o, state);
    }
    std::erase_if(suite.methods, [](const suite::TestMethod& m) {
      return m.decl.body.empty();
    });
    if (!changed) return outcomes;
  }
  return suite::RunSuite(program, suite, step_budget);
}

RepairResult RepairLoop(const GenesisContext& ctx,
                        const llm::AgentConfig& agent, std::string_view reply,
                        uint64_t seed) {
  return RunRepair(ctx, agent, ParseCandidate(reply), seed);
}

RepairResult RepairLoop(const GenesisContext& ctx,
                        const llm::AgentConfig& agent, TestSuite suite,
                        uint64_t seed) {
  Candidate c;
  c.suite = std::move(suite);
  return RunRepair(ctx, agent, std::move(c), seed);
}

std::string CoverageReportText(const Program& program, const TestSuite& suite,
                               int64_t step_budget) {
  std::vector<minilang::CoverageReport> reports{minilang::EmptyCoverage(program)};
  for (const auto& [name, outcome] :
       suite::RunSuite(program, suite, step_budget)) {
    if (outcome.status == RunStatus::kPass) reports.push_back(outcome.coverage);
  }
  const minilang::CoverageReport merged = minilang::MergeCoverage(reports);
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  for (const auto& fn : program.functions) {
    if (!fn.is_focal) continue;
    Program only = program;
    for (auto& other : only.functions) {
      if (other.name != fn.name) other.is_focal = false;
    }
    const minilang::CoverageSummary s = minilang::Summarize(only, merged);
    out << "COVERAGE " << fn.name << " line=" << s.LinePercent()
        << "% branch=" << s.BranchPercent() << "%\n";
  }
  out << minilang::FormatMissedCoverage(program, merged);
  return out.str();
}

EnhanceResult EnhanceCoverage(const GenesisContext& ctx, const TestSuite& suite,
                              const llm::AgentConfig& agent, uint64_t seed) {
  EnhanceResult result;
  std::vector<minilang::CoverageReport> reports{
      minilang::EmptyCoverage(ctx.program)};
  for (const auto& [name, outcome] :
       suite::RunSuite(ctx.program, suite, ctx.step_budget)) {
    if (outcome.status == RunStatus::kPass) reports.push_back(outcome.coverage);
  }
  const minilang::CoverageSummary summary =
      minilang::Summarize(ctx.program, minilang::MergeCoverage(reports));
  if (summary.covered_focal_lines == summary.focal_lines &&
      summary.covered_focal_arms == summary.focal_arms) {
    result.skipped = true;
    return result;
  }
  const llm::RenderedPrompt prompt = llm::RenderPrompt(
      llm::TemplateId::kCoverageEnhance,
      {{"coverage_report",
        CoverageReportText(ctx.program, suite, ctx.step_budget)},
       {"focal_methods", FocalSignatures(ctx.program)},
       {"source_code", ctx.source}});
  std::string reply;
  try {
    reply = ctx.gateway
                .Complete(Request(ctx, llm::TemplateId::kCoverageEnhance,
                                  prompt, agent.temperature,
                                  MixSeeds(seed, kEnhanceSalt)))
                .text;
  } catch (const std::exception& e) {
    spdlog::warn("coverage enhancement request failed: {}", e.what());
    return result;
  }
  RepairResult repaired =
      RepairLoop(ctx, agent, reply, MixSeeds(seed, kEnhanceRepairSalt));
  result.complementary = std::move(repaired.suite);
  result.state = std::move(repaired.state);
  return result;
}

uint64_t PipelineSeed(uint64_t global_seed, int strategy, int sample) {
  return MixSeeds(global_seed, static_cast<uint64_t>(strategy),
                  static_cast<uint64_t>(sample));
}

PipelineResult RunPipeline(const GenesisContext& ctx,
                           const llm::AgentConfig& agent, int strategy_index,
                           int sample, uint64_t global_seed) {
  PipelineResult out;
  out.agent_id = agent.agent_id;
  out.sample = sample;
  const std::string tag = agent.agent_id + ":" + std::to_string(sample);
  const uint64_t seed = PipelineSeed(global_seed, strategy_index, sample);

  try {
    const llm::RenderedPrompt prompt = llm::RenderPrompt(
        agent.system_prompt, {{"focal_methods", FocalSignatures(ctx.program)},
                              {"source_code", ctx.source}});
    const llm::CompletionResponse reply = ctx.gateway.Complete(
        Request(ctx, agent.system_prompt, prompt, agent.temperature,
                MixSeeds(seed, kGenerateSalt)));
    RepairResult repaired =
        RepairLoop(ctx, agent, reply.text, MixSeeds(seed, kRepairSalt));
    out.generation_repair = std::move(repaired.state);

    EnhanceResult enhanced =
        EnhanceCoverage(ctx, repaired.suite, agent, MixSeeds(seed, kEnhanceSalt));
    out.enhancement_repair = std::move(enhanced.state);
    out.enhancement_skipped = enhanced.skipped;

    TestSuite merged = suite::MergeSuites(repaired.suite, enhanced.complementary);
    out.suite = suite::PruneFailing(
        merged, suite::RunSuite(ctx.program, merged, ctx.step_budget));
  } catch (const std::exception& e) {
    spdlog::warn("pipeline {} failed: {}", tag, e.what());
    out.error = e.what();
    out.suite = TestSuite{};
  }
  out.suite.suite_id = "init-" + agent.agent_id + "-" + std::to_string(sample);
  out.suite.provenance = tag;
  return out;
}

std::vector<PipelineResult> GenerateInitial(const GenesisContext& ctx,
                                            const PopulationSpec& spec,
                                            uint64_t global_seed,
                                            int workers) {
  struct Job {
    int strategy;
    int sample;
  };
  std::vector<Job> jobs;
  for (int s = 0; s < static_cast<int>(spec.strategies.size()); ++s) {
    for (int k = 0; k < spec.samples_per_strategy; ++k) jobs.push_back({s, k});
  }
  std::vector<PipelineResult> results(jobs.size());
  auto run = [&](size_t i) {
    const Job& job = jobs[i];
    results[i] = RunPipeline(ctx, spec.strategies[job.strategy], job.strategy,
                             job.sample, global_seed);
  };
  if (workers <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) run(i);
    return results;
  }
  std::vector<std::future<void>> tasks;
  for (int w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (size_t i = w; i < jobs.size(); i += workers) run(i);
    }));
  }
  for (auto& t : tasks) t.get();
  return results;
}

}  // namespace evotest::genesis
