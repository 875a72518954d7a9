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

#ifndef EVOTEST_MINILANG_COVERAGE_H_
#define EVOTEST_MINILANG_COVERAGE_H_

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "evotest/minilang/ast.h"

namespace evotest::minilang {

enum class Arm { kThen, kElse };

std::string_view ArmName(Arm arm);

// Raised when coverage reports from different programs are combined.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Line and branch coverage of one or more test runs against one program.
// Lines are statement lines; every if/while condition contributes two arms.
struct CoverageReport {
  uint64_t program_fingerprint = 0;
  std::set<std::pair<std::string, int>> executed_lines;
  std::set<std::pair<int, Arm>> branch_outcomes;
  int focal_line_total = 0;
  int focal_branch_arm_total = 0;

  friend bool operator==(const CoverageReport&,
                         const CoverageReport&) = default;
};

// Identity used to reject merges across programs: hash of the printed form.
uint64_t ProgramFingerprint(const Program& program);

// Distinct (function, line) pairs over the statements of focal functions.
std::set<std::pair<std::string, int>> FocalLines(const Program& program);

// A report with totals filled in and nothing covered.
CoverageReport EmptyCoverage(const Program& program);

// Set union. Throws UsageError when the reports disagree on the program.
CoverageReport MergeCoverage(std::span<const CoverageReport> reports);

struct CoverageSummary {
  int covered_focal_lines = 0;
  int focal_lines = 0;
  int covered_focal_arms = 0;
  int focal_arms = 0;

  // Percentages; an empty denominator counts as fully covered.
  double LinePercent() const;
  double BranchPercent() const;
};

CoverageSummary Summarize(const Program& program,
                          const CoverageReport& report);

// Prompt-visible description of what is not covered, one item per line:
//   MISSED LINE <function>:<line>
//   MISSED BRANCH <function>:<line> arm=<then|else>
// sorted by function, then line. Empty when everything focal is covered.
std::string FormatMissedCoverage(const Program& program,
                                 const CoverageReport& report);

}  // namespace evotest::minilang

#endif  // EVOTEST_MINILANG_COVERAGE_H_
