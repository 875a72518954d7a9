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

#include "evotest/minilang/coverage.h"

#include <map>
#include <tuple>
#include <vector>

#include "evotest/minilang/printer.h"
#include "evotest/util/hash.h"

namespace evotest::minilang {

std::string_view ArmName(Arm arm) {
  return arm == Arm::kThen ? "then" : "else";
}

uint64_t ProgramFingerprint(const Program& program) {
  return Fnv1a64(PrintProgram(program));
}

std::set<std::pair<std::string, int>> FocalLines(const Program& program) {
  std::set<std::pair<std::string, int>> lines;
  for (const auto& [id, line] : program.line_index) {
    const std::string& fn = program.statement_function.at(id);
    const FunctionDecl* decl = program.FindFunction(fn);
    if (decl != nullptr && decl->is_focal) lines.emplace(fn, line);
  }
  return lines;
}

CoverageReport EmptyCoverage(const Program& program) {
  CoverageReport report;
  report.program_fingerprint = ProgramFingerprint(program);
  report.focal_line_total = static_cast<int>(FocalLines(program).size());
  for (const auto& [id, info] : program.branch_index) {
    const FunctionDecl* decl = program.FindFunction(info.function);
    if (decl != nullptr && decl->is_focal) {
      report.focal_branch_arm_total += info.arm_count;
    }
  }
  return report;
}

CoverageReport MergeCoverage(std::span<const CoverageReport> reports) {
  if (reports.empty()) return {};
  CoverageReport merged = reports.front();
  for (const auto& report : reports.subspan(1)) {
    if (report.program_fingerprint != merged.program_fingerprint) {
      throw UsageError("cannot merge coverage of different programs");
    }
    merged.executed_lines.insert(report.executed_lines.begin(),
                                 report.executed_lines.end());
    merged.branch_outcomes.insert(report.branch_outcomes.begin(),
                                  report.branch_outcomes.end());
  }
  return merged;
}

double CoverageSummary::LinePercent() const {
  if (focal_lines == 0) return 100.0;
  return 100.0 * covered_focal_lines / focal_lines;
}

double CoverageSummary::BranchPercent() const {
  if (focal_arms == 0) return 100.0;
  return 100.0 * covered_focal_arms / focal_arms;
}

CoverageSummary Summarize(const Program& program,
                          const CoverageReport& report) {
  CoverageSummary summary;
  const auto focal_lines = FocalLines(program);
  summary.focal_lines = static_cast<int>(focal_lines.size());
  for (const auto& line : focal_lines) {
    if (report.executed_lines.contains(line)) ++summary.covered_focal_lines;
  }
  for (const auto& [id, info] : program.branch_index) {
    const FunctionDecl* decl = program.FindFunction(info.function);
    if (decl == nullptr || !decl->is_focal) continue;
    summary.focal_arms += info.arm_count;
    for (const Arm arm : {Arm::kThen, Arm::kElse}) {
      if (report.branch_outcomes.contains({id, arm})) {
        ++summary.covered_focal_arms;
      }
    }
  }
  return summary;
}

std::string FormatMissedCoverage(const Program& program,
                                 const CoverageReport& report) {
  // (function, line, kind, arm) gives the frozen ordering: lines before
  // branches on the same line, then before else.
  std::set<std::tuple<std::string, int, int, int>> items;
  for (const auto& line : FocalLines(program)) {
    if (!report.executed_lines.contains(line)) {
      items.emplace(line.first, line.second, 0, 0);
    }
  }
  for (const auto& [id, info] : program.branch_index) {
    const FunctionDecl* decl = program.FindFunction(info.function);
    if (decl == nullptr || !decl->is_focal) continue;
    for (const Arm arm : {Arm::kThen, Arm::kElse}) {
      if (!report.branch_outcomes.contains({id, arm})) {
        items.emplace(info.function, info.line, 1,
                      arm == Arm::kThen ? 0 : 1);
      }
    }
  }
  std::string out;
  for (const auto& [fn, line, kind, arm] : items) {
    if (kind == 0) {
      out += "MISSED LINE " + fn + ":" + std::to_string(line) + "\n";
    } else {
      out += "MISSED BRANCH " + fn + ":" + std::to_string(line) +
             " arm=" + (arm == 0 ? "then" : "else") + "\n";
    }
  }
  return out;
}

}  // namespace evotest::minilang
