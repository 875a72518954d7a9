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

#include "evotest/suite/test_suite.h"

#include <algorithm>
#include <utility>

#include "evotest/minilang/parser.h"
#include "evotest/minilang/printer.h"
#include "evotest/util/hash.h"

namespace evotest::suite {

using minilang::Expr;
using minilang::FunctionDecl;
using minilang::Stmt;

std::string_view MethodStatusName(MethodStatus status) {
  switch (status) {
    case MethodStatus::kUnknown:
      return "unknown";
    case MethodStatus::kPassing:
      return "passing";
    case MethodStatus::kFailing:
      return "failing";
  }
  return "?";
}

namespace {

int ExprAssertions(const Expr& e) {
  int count = e.kind == Expr::Kind::kCall && minilang::IsAssertion(e.text);
  for (const auto& op : e.operands) count += ExprAssertions(op);
  return count;
}

void RenameExprCalls(Expr& e, const std::string& from, const std::string& to) {
  if (e.kind == Expr::Kind::kCall && e.text == from) e.text = to;
  for (auto& op : e.operands) RenameExprCalls(op, from, to);
}

std::string UniqueName(const std::string& base,
                       std::set<std::string>& taken) {
  for (int k = 1;; ++k) {
    std::string candidate = base + "_m" + std::to_string(k);
    if (taken.insert(candidate).second) return candidate;
  }
}

}  // namespace

int CountAssertions(const std::vector<Stmt>& block) {
  int count = 0;
  for (const auto& stmt : block) {
    if (stmt.expr) count += ExprAssertions(*stmt.expr);
    count += CountAssertions(stmt.body) + CountAssertions(stmt.else_body);
  }
  return count;
}

void RenameCalls(std::vector<Stmt>& block, const std::string& from,
                 const std::string& to) {
  for (auto& stmt : block) {
    if (stmt.expr) RenameExprCalls(*stmt.expr, from, to);
    RenameCalls(stmt.body, from, to);
    RenameCalls(stmt.else_body, from, to);
  }
}

double FitnessScalar(double bcct, double lcct, double msct) {
  return 0.3 * bcct + 0.2 * lcct + 0.5 * msct;
}

FitnessScore FitnessScore::FromMetrics(double lcct, double bcct, double msct) {
  return FitnessScore{lcct, bcct, msct, FitnessScalar(bcct, lcct, msct)};
}

minilang::TestFile TestSuite::ToTestFile() const {
  minilang::TestFile file;
  file.path = path;
  for (const auto& m : methods) file.functions.push_back(m.decl);
  for (const auto& h : helpers) file.functions.push_back(h);
  return file;
}

std::string TestSuite::Print() const {
  std::string out;
  bool first = true;
  auto emit = [&](const FunctionDecl& fn) {
    if (!first) out += "\n";
    first = false;
    out += minilang::PrintFunction(fn);
  };
  for (const auto& m : methods) emit(m.decl);
  for (const auto& h : helpers) emit(h);
  return out;
}

uint64_t TestSuite::ContentHash() const { return Fnv1a64(Print()); }

const TestMethod* TestSuite::FindMethod(std::string_view name) const {
  for (const auto& m : methods) {
    if (m.name() == name) return &m;
  }
  return nullptr;
}

const FunctionDecl* TestSuite::FindHelper(std::string_view name) const {
  for (const auto& h : helpers) {
    if (h.name == name) return &h;
  }
  return nullptr;
}

uint64_t TestSuite::FitnessKey(uint64_t program_fingerprint) const {
  return MixSeeds(ContentHash(), program_fingerprint);
}

std::optional<FitnessScore> TestSuite::CachedScore(
    uint64_t program_fingerprint) const {
  if (fitness_cache && fitness_cache->key == FitnessKey(program_fingerprint)) {
    return fitness_cache->score;
  }
  return std::nullopt;
}

namespace {

TestMethod MakeMethod(FunctionDecl decl, MethodStatus status) {
  TestMethod m;
  m.assertion_count = CountAssertions(decl.body);
  m.decl = std::move(decl);
  m.status = status;
  return m;
}

}  // namespace

TestSuite SplitMethods(std::string_view source, std::string path) {
  minilang::TestFile file = minilang::ParseTestFile(source, path);
  TestSuite suite;
  suite.path = std::move(path);
  for (auto& fn : file.functions) {
    if (fn.is_test) {
      suite.methods.push_back(MakeMethod(std::move(fn), MethodStatus::kUnknown));
    } else {
      suite.helpers.push_back(std::move(fn));
    }
  }
  return suite;
}

TestSuite Normalize(const TestSuite& suite) {
  TestSuite out = SplitMethods(suite.Print(), suite.path);
  out.suite_id = suite.suite_id;
  out.provenance = suite.provenance;
  for (size_t i = 0; i < out.methods.size(); ++i) {
    out.methods[i].status = suite.methods[i].status;
  }
  out.fitness_cache = suite.fitness_cache;
  return out;
}

std::set<std::string> HelperClosure(const TestSuite& suite,
                                    const FunctionDecl& method) {
  std::set<std::string> closure;
  std::vector<std::string> pending = minilang::CalledFunctions(method.body);
  while (!pending.empty()) {
    const std::string name = std::move(pending.back());
    pending.pop_back();
    const FunctionDecl* helper = suite.FindHelper(name);
    if (helper == nullptr || !closure.insert(name).second) continue;
    for (auto& callee : minilang::CalledFunctions(helper->body)) {
      pending.push_back(std::move(callee));
    }
  }
  return closure;
}

namespace {

std::vector<FunctionDecl> HelpersFor(const TestSuite& suite,
                                     const std::vector<TestMethod>& methods) {
  std::set<std::string> needed;
  for (const auto& m : methods) {
    needed.merge(HelperClosure(suite, m.decl));
  }
  std::vector<FunctionDecl> helpers;
  for (const auto& h : suite.helpers) {
    if (needed.contains(h.name)) helpers.push_back(h);
  }
  return helpers;
}

}  // namespace

TestSuite SelectMethods(const TestSuite& suite,
                        const std::vector<size_t>& indices) {
  TestSuite out;
  out.path = suite.path;
  out.provenance = suite.provenance;
  for (const size_t i : indices) out.methods.push_back(suite.methods.at(i));
  out.helpers = HelpersFor(suite, out.methods);
  return out;
}

TestSuite MergeSuites(const TestSuite& a, const TestSuite& b) {
  TestSuite out;
  out.suite_id = a.suite_id;
  out.provenance = a.provenance;
  out.path = a.path;
  out.methods = a.methods;
  out.helpers = a.helpers;

  std::set<std::string> taken;
  for (const auto& m : a.methods) taken.insert(m.name());
  for (const auto& h : a.helpers) taken.insert(h.name);
  for (const auto& m : b.methods) taken.insert(m.name());
  for (const auto& h : b.helpers) taken.insert(h.name);

  std::vector<FunctionDecl> incoming_helpers = b.helpers;
  std::vector<TestMethod> incoming_methods = b.methods;
  std::vector<bool> keep_helper(incoming_helpers.size(), true);

  auto rename_everywhere = [&](const std::string& from, const std::string& to) {
    for (auto& h : incoming_helpers) RenameCalls(h.body, from, to);
    for (auto& m : incoming_methods) RenameCalls(m.decl.body, from, to);
  };

  for (size_t i = 0; i < incoming_helpers.size(); ++i) {
    FunctionDecl& h = incoming_helpers[i];
    const FunctionDecl* existing = out.FindHelper(h.name);
    if (existing != nullptr && minilang::SameShape(*existing, h)) {
      keep_helper[i] = false;
      continue;
    }
    const bool collides = existing != nullptr || out.FindMethod(h.name);
    if (collides) {
      const std::string old_name = h.name;
      const std::string new_name = UniqueName(old_name, taken);
      h.name = new_name;
      rename_everywhere(old_name, new_name);
    }
  }
  for (size_t i = 0; i < incoming_helpers.size(); ++i) {
    if (keep_helper[i]) out.helpers.push_back(std::move(incoming_helpers[i]));
  }

  for (auto& m : incoming_methods) {
    const bool duplicate =
        std::any_of(out.methods.begin(), out.methods.end(),
                    [&](const TestMethod& existing) {
                      return minilang::SameShape(existing.decl.body,
                                                 m.decl.body);
                    });
    if (duplicate) continue;
    if (out.FindMethod(m.name()) != nullptr ||
        out.FindHelper(m.name()) != nullptr) {
      m.decl.name = UniqueName(m.name(), taken);
    }
    m.assertion_count = CountAssertions(m.decl.body);
    out.methods.push_back(std::move(m));
  }
  return Normalize(out);
}

TestSuite PruneFailing(
    const TestSuite& suite,
    const std::map<std::string, minilang::RunOutcome>& outcomes) {
  TestSuite out;
  out.suite_id = suite.suite_id;
  out.provenance = suite.provenance;
  out.path = suite.path;
  for (const auto& m : suite.methods) {
    auto it = outcomes.find(m.name());
    if (it == outcomes.end() ||
        it->second.status != minilang::RunStatus::kPass) {
      continue;
    }
    TestMethod kept = m;
    kept.status = MethodStatus::kPassing;
    out.methods.push_back(std::move(kept));
  }
  out.helpers = HelpersFor(suite, out.methods);
  return Normalize(out);
}

SuiteSize SizeOf(const TestSuite& suite) {
  SuiteSize size;
  size.method_count = static_cast<int>(suite.methods.size());
  for (const auto& m : suite.methods) {
    size.statement_count += minilang::CountStatements(m.decl.body);
  }
  for (const auto& h : suite.helpers) {
    size.statement_count += minilang::CountStatements(h.body);
  }
  return size;
}

std::map<std::string, minilang::RunOutcome> RunSuite(
    const minilang::Program& program, const TestSuite& suite,
    int64_t step_budget) {
  std::vector<const FunctionDecl*> helpers;
  for (const auto& h : suite.helpers) helpers.push_back(&h);
  const minilang::Interpreter interp(program, std::move(helpers), suite.path);
  std::map<std::string, minilang::RunOutcome> outcomes;
  for (const auto& m : suite.methods) {
    outcomes.emplace(m.name(), interp.RunMethod(m.decl, step_budget));
  }
  return outcomes;
}

mutation::TestHarness MakeHarness(const TestSuite& suite,
                                  const std::vector<std::string>& tests) {
  mutation::TestHarness harness;
  harness.path = suite.path;
  for (const auto& name : tests) {
    if (const TestMethod* m = suite.FindMethod(name)) {
      harness.tests.push_back(&m->decl);
    }
  }
  for (const auto& h : suite.helpers) harness.helpers.push_back(&h);
  return harness;
}

}  // namespace evotest::suite
