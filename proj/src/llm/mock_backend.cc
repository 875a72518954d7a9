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

#include "evotest/llm/mock_backend.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "evotest/llm/prompts.h"
#include "evotest/minilang/ast.h"
#include "evotest/minilang/interpreter.h"
#include "evotest/minilang/parser.h"
#include "evotest/minilang/printer.h"
#include "evotest/util/hash.h"
#include "evotest/util/random.h"
#include "evotest/util/strings.h"

namespace evotest::llm {
namespace {

using minilang::Expr;
using minilang::FunctionDecl;
using minilang::Program;
using minilang::RunOutcome;
using minilang::RunStatus;
using minilang::Stmt;
using minilang::Value;

constexpr int64_t kProbeBudget = 20000;
constexpr int kProbeAttempts = 6;

struct Style {
  int min_tests = 2;
  int max_tests = 4;
  int min_calls = 1;
  int max_calls = 2;
  double boundary_rate = 0.2;
  double weak_scale = 1.0;
  double helper_scale = 1.0;
};

Style StyleFor(std::string_view template_id) {
  Style s;
  if (template_id == "gen_A2") {
    s.min_calls = 2;
    s.max_calls = 3;
    s.weak_scale = 0.3;
  } else if (template_id == "gen_A3") {
    s.boundary_rate = 0.4;
  } else if (template_id == "gen_A4") {
    s.max_calls = 1;
    s.boundary_rate = 0.7;
  } else if (template_id == "gen_A5") {
    s.max_tests = 3;
    s.max_calls = 1;
    s.helper_scale = 2.0;
  }
  return s;
}

bool IsKeyword(std::string_view name) {
  static const std::set<std::string_view> kKeywords = {
      "fn", "test", "let", "if", "else", "while", "return", "true", "false"};
  return kKeywords.contains(name);
}

struct Inputs {
  std::vector<int64_t> boundary_ints;
  std::vector<std::string> strings;
  std::string alphabet;
};

void CollectLiterals(const Expr& e, std::set<int64_t>& ints,
                     std::set<std::string>& strings) {
  if (e.kind == Expr::Kind::kIntLit) {
    const int64_t c = e.int_value;
    ints.insert(c);
    if (c > INT64_MIN) ints.insert(c - 1);
    if (c < INT64_MAX) ints.insert(c + 1);
  } else if (e.kind == Expr::Kind::kStringLit) {
    strings.insert(e.text);
  }
  for (const auto& op : e.operands) CollectLiterals(op, ints, strings);
}

void CollectLiterals(const std::vector<Stmt>& block, std::set<int64_t>& ints,
                     std::set<std::string>& strings) {
  for (const auto& stmt : block) {
    if (stmt.expr) CollectLiterals(*stmt.expr, ints, strings);
    CollectLiterals(stmt.body, ints, strings);
    CollectLiterals(stmt.else_body, ints, strings);
  }
}

Inputs CollectInputs(const Program& program) {
  std::set<int64_t> ints;
  std::set<std::string> strings;
  for (const auto& fn : program.functions) {
    CollectLiterals(fn.body, ints, strings);
  }
  Inputs in;
  in.boundary_ints.assign(ints.begin(), ints.end());
  in.strings.assign(strings.begin(), strings.end());
  std::set<char> chars;
  for (const auto& s : strings) chars.insert(s.begin(), s.end());
  in.alphabet.assign(chars.begin(), chars.end());
  if (in.alphabet.empty()) in.alphabet = "abc";
  return in;
}

std::string Literal(const Value& v) {
  return minilang::PrintExpr(minilang::ValueLiteral(v));
}

std::string CallText(const std::string& callee,
                     const std::vector<Value>& args) {
  std::vector<std::string> parts;
  for (const auto& a : args) parts.push_back(Literal(a));
  return callee + "(" + Join(parts, ", ") + ")";
}

// Removes the final closing brace so the text no longer parses.
std::string Malform(std::string text) {
  const size_t pos = text.rfind('}');
  if (pos != std::string::npos) text.erase(pos, 1);
  return text;
}

struct Probe {
  std::vector<Value> args;
  RunOutcome outcome;
};

struct Target {
  bool is_branch = false;
  std::string function;
  int line = 0;
  int branch_id = -1;
  minilang::Arm arm = minilang::Arm::kThen;
};

class Writer {
 public:
  Writer(const Program& program, const MockOptions& options, Rng& rng)
      : program_(program),
        options_(options),
        rng_(rng),
        interp_(program),
        inputs_(CollectInputs(program)) {
    for (const auto& fn : program.functions) {
      if (fn.is_focal) focal_.push_back(&fn);
    }
  }

  std::string Generate(const Style& style) {
    if (focal_.empty()) return "";
    std::ostringstream out;
    std::map<std::string, std::string> helpers;  // function -> helper name
    const int n_tests =
        static_cast<int>(rng_.UniformInt(style.min_tests, style.max_tests));
    int test_index = 0;
    for (int t = 0; t < n_tests; ++t) {
      const bool use_helper =
          rng_.Bernoulli(options_.helper_rate * style.helper_scale);
      const int calls =
          static_cast<int>(rng_.UniformInt(style.min_calls, style.max_calls));
      std::vector<std::string> lines;
      std::string first_fn;
      int var = 0;
      for (int c = 0; c < calls; ++c) {
        const FunctionDecl& fn = *rng_.Pick(focal_);
        auto [probe, ok] = ProbeCall(fn, style.boundary_rate);
        std::string callee = fn.name;
        if (use_helper) {
          auto [it, inserted] = helpers.emplace(fn.name, "via_" + fn.name);
          callee = it->second;
        }
        if (rng_.Bernoulli(options_.typo_rate)) callee = Typo(callee);
        const std::string call = CallText(callee, probe.args);
        if (first_fn.empty()) first_fn = fn.name;
        if (!ok) {
          // Keep an occasional call that fails inside the program.
          if (rng_.Bernoulli(0.3)) {
            lines.push_back("let v" + std::to_string(var++) + " = " + call +
                            ";");
          }
          continue;
        }
        EmitCheck(lines, call, probe.outcome.result, var,
                  rng_.Bernoulli(options_.weak_assertion_rate *
                                 style.weak_scale));
      }
      if (lines.empty()) continue;
      out << (test_index > 0 ? "\n" : "") << "test test_" << first_fn << "_"
          << test_index << "() {\n";
      for (const auto& line : lines) out << "  " << line << "\n";
      out << "}\n";
      ++test_index;
    }
    for (const auto& [fn_name, helper] : helpers) {
      const FunctionDecl* fn = program_.FindFunction(fn_name);
      std::vector<std::string> params;
      for (size_t i = 0; i < fn->params.size(); ++i) {
        params.push_back("p" + std::to_string(i));
      }
      out << "\nfn " << helper << "(" << Join(params, ", ") << ") {\n"
          << "  return " << fn_name << "(" << Join(params, ", ") << ");\n"
          << "}\n";
    }
    return MaybeMalform(out.str());
  }

  std::string Enhance(std::vector<Target> targets) {
    if (focal_.empty() || targets.empty()) return "";
    std::ostringstream out;
    int emitted = 0;
    for (int i = 0; i < options_.enhance_probes && !targets.empty() &&
                    emitted < options_.enhance_max_tests;
         ++i) {
      const FunctionDecl* fn = rng_.Pick(focal_);
      if (rng_.Bernoulli(0.7)) {
        const Target& wanted = rng_.Pick(targets);
        if (const FunctionDecl* f = program_.FindFunction(wanted.function);
            f != nullptr && f->is_focal) {
          fn = f;
        }
      }
      auto [probe, ok] = ProbeCall(*fn, 0.5);
      if (!ok) continue;
      const size_t before = targets.size();
      std::erase_if(targets, [&](const Target& t) {
        const auto& cov = probe.outcome.coverage;
        return t.is_branch ? cov.branch_outcomes.contains({t.branch_id, t.arm})
                           : cov.executed_lines.contains({t.function, t.line});
      });
      if (targets.size() == before) continue;
      std::vector<std::string> lines;
      int var = 0;
      std::string callee = fn->name;
      if (rng_.Bernoulli(options_.typo_rate)) callee = Typo(callee);
      EmitCheck(lines, CallText(callee, probe.args), probe.outcome.result, var,
                false);
      out << (emitted > 0 ? "\n" : "") << "test " << fn->name << "_"
          << emitted << "_enhanced() {\n";
      for (const auto& line : lines) out << "  " << line << "\n";
      out << "}\n";
      ++emitted;
    }
    return MaybeMalform(out.str());
  }

  std::string Repair(const std::string& tests_text) {
    minilang::TestFile file;
    try {
      file = minilang::ParseTestFile(tests_text);
    } catch (const minilang::ParseError&) {
      if (!rng_.Bernoulli(options_.repair_success_rate)) return tests_text;
      try {
        minilang::ParseTestFile(tests_text + "\n}\n");
        return tests_text + "\n}\n";
      } catch (const minilang::ParseError&) {
        return Generate(Style{});
      }
    }
    std::vector<const FunctionDecl*> helpers;
    for (const auto& fn : file.functions) {
      if (!fn.is_test) helpers.push_back(&fn);
    }
    const minilang::Interpreter interp(program_, helpers, file.path);
    for (auto& fn : file.functions) {
      if (!fn.is_test) continue;
      if (interp.RunMethod(fn).status == RunStatus::kPass) continue;
      if (!rng_.Bernoulli(options_.repair_success_rate)) continue;
      FixMethod(interp, fn);
    }
    return minilang::PrintTestFile(file);
  }

  std::string Mutate(const std::string& method_text,
                     const std::string& helpers_text) {
    minilang::TestFile file;
    try {
      file = minilang::ParseTestFile(method_text + "\n" + helpers_text);
    } catch (const minilang::ParseError&) {
      return method_text;
    }
    auto method = std::find_if(file.functions.begin(), file.functions.end(),
                               [](const FunctionDecl& f) { return f.is_test; });
    if (method == file.functions.end() || focal_.empty()) return method_text;
    std::vector<const FunctionDecl*> helpers;
    for (const auto& fn : file.functions) {
      if (!fn.is_test) helpers.push_back(&fn);
    }
    const minilang::Interpreter interp(program_, helpers, file.path);

    std::vector<const FunctionDecl*> called;
    for (const auto& name : minilang::CalledFunctions(method->body)) {
      const FunctionDecl* f = program_.FindFunction(name);
      if (f != nullptr && f->is_focal) called.push_back(f);
    }
    std::vector<std::string> vars;
    for (const auto& stmt : method->body) {
      if (stmt.kind == Stmt::Kind::kLet) vars.push_back(stmt.name);
    }

    std::vector<std::string> lines;
    const int wanted = static_cast<int>(rng_.UniformInt(1, 5));
    for (int i = 0; i < wanted; ++i) {
      if (!vars.empty() && rng_.Bernoulli(0.3)) {
        const std::string& var = rng_.Pick(vars);
        FunctionDecl probe = *method;
        probe.body.push_back(ReturnOf(Expr::Ident(var, {})));
        const RunOutcome out = interp.RunMethod(probe, kProbeBudget);
        if (out.status == RunStatus::kPass &&
            !std::holds_alternative<minilang::Unit>(out.result)) {
          lines.push_back(AssertLine(var, out.result,
                                     rng_.Bernoulli(
                                         options_.wrong_expectation_rate / 2)));
          continue;
        }
      }
      const FunctionDecl* fn = !called.empty() && rng_.Bernoulli(0.6)
                                   ? rng_.Pick(called)
                                   : rng_.Pick(focal_);
      auto [probe, ok] = ProbeCall(*fn, 0.6);
      if (!ok || std::holds_alternative<minilang::Unit>(probe.outcome.result)) {
        continue;
      }
      lines.push_back(
          AssertLine(CallText(fn->name, probe.args), probe.outcome.result,
                     rng_.Bernoulli(options_.wrong_expectation_rate / 2)));
    }

    std::string text = minilang::PrintFunction(*method);
    const size_t close = text.rfind('}');
    std::string added;
    for (const auto& line : lines) added += "  " + line + "\n";
    text.insert(close, added);
    return MaybeMalform(std::move(text));
  }

 private:
  static Stmt ReturnOf(Expr e) {
    Stmt s;
    s.kind = Stmt::Kind::kReturn;
    s.expr = std::move(e);
    return s;
  }

  std::string MaybeMalform(std::string text) {
    if (!text.empty() && rng_.Bernoulli(options_.malformed_rate)) {
      return Malform(std::move(text));
    }
    return text;
  }

  std::string Typo(const std::string& name) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::string typo = name;
      const size_t i = 1 + rng_.UniformBelow(std::max<size_t>(1, name.size() - 1));
      if (i >= typo.size()) continue;
      const char c = static_cast<char>('a' + rng_.UniformBelow(26));
      if (c == typo[i]) continue;
      typo[i] = c;
      if (program_.FindFunction(typo) == nullptr &&
          !minilang::IsBuiltin(typo) && !IsKeyword(typo)) {
        return typo;
      }
    }
    return name;
  }

  Value RandomString() {
    if (!inputs_.strings.empty() && rng_.Bernoulli(0.3)) {
      return rng_.Pick(inputs_.strings);
    }
    const int len = rng_.Bernoulli(0.3) ? 1 : static_cast<int>(rng_.UniformInt(0, 5));
    std::string s;
    for (int i = 0; i < len; ++i) {
      s += inputs_.alphabet[rng_.UniformBelow(inputs_.alphabet.size())];
    }
    if (rng_.Bernoulli(0.3)) s += std::string(s.rbegin(), s.rend());
    return s;
  }

  Value RandomInt(double boundary_rate) {
    if (!inputs_.boundary_ints.empty() && rng_.Bernoulli(boundary_rate)) {
      return rng_.Pick(inputs_.boundary_ints);
    }
    return rng_.UniformInt(-10, 10);
  }

  // Tries a few argument vectors; returns the first passing call, else the
  // last attempt with ok = false.
  std::pair<Probe, bool> ProbeCall(const FunctionDecl& fn,
                                   double boundary_rate) {
    Probe probe;
    for (int attempt = 0; attempt < kProbeAttempts; ++attempt) {
      probe.args.clear();
      for (size_t i = 0; i < fn.params.size(); ++i) {
        const bool want_string =
            attempt < 2 ? false
            : attempt < 4 ? true
                          : rng_.Bernoulli(0.5);
        probe.args.push_back(want_string ? RandomString()
                                         : RandomInt(boundary_rate));
      }
      probe.outcome = interp_.CallFunction(fn.name, probe.args, kProbeBudget);
      if (probe.outcome.status == RunStatus::kPass) return {probe, true};
    }
    return {probe, false};
  }

  static Value Perturb(const Value& v) {
    if (const auto* i = std::get_if<int64_t>(&v)) {
      return *i == INT64_MAX ? *i - 1 : *i + 1;
    }
    if (const auto* b = std::get_if<bool>(&v)) return !*b;
    if (const auto* s = std::get_if<std::string>(&v)) return *s + "x";
    return v;
  }

  static std::string AssertLine(const std::string& subject, const Value& v,
                                bool wrong) {
    const Value expected = wrong ? Perturb(v) : v;
    if (const auto* b = std::get_if<bool>(&expected)) {
      return std::string(*b ? "assert_true(" : "assert_false(") + subject +
             ");";
    }
    return "assert_eq(" + subject + ", " + Literal(expected) + ");";
  }

  void EmitCheck(std::vector<std::string>& lines, const std::string& call,
                 const Value& v, int& var, bool weak) {
    if (std::holds_alternative<minilang::Unit>(v)) {
      lines.push_back(call + ";");
      return;
    }
    const std::string name = "v" + std::to_string(var++);
    if (weak) {
      lines.push_back("let " + name + " = " + call + ";");
      return;
    }
    const bool wrong = rng_.Bernoulli(options_.wrong_expectation_rate);
    if (rng_.Bernoulli(0.3)) {
      lines.push_back("let " + name + " = " + call + ";");
      lines.push_back(AssertLine(name, v, wrong));
    } else {
      lines.push_back(AssertLine(call, v, wrong));
    }
  }

  // Rebuilds the method one statement at a time, correcting expectations and
  // misspelled names and dropping statements that cannot be saved.
  void FixMethod(const minilang::Interpreter& interp, FunctionDecl& method) {
    FunctionDecl work = method;
    work.body.clear();
    auto passes = [&](const FunctionDecl& f) {
      return interp.RunMethod(f, kProbeBudget).status == RunStatus::kPass;
    };
    for (Stmt stmt : method.body) {
      for (int attempt = 0; attempt < 4; ++attempt) {
        work.body.push_back(stmt);
        const RunOutcome out = interp.RunMethod(work, kProbeBudget);
        work.body.pop_back();
        if (out.status == RunStatus::kPass) {
          work.body.push_back(stmt);
          break;
        }
        if (!Correct(interp, work, out, stmt)) break;
      }
    }
    method.body = std::move(work.body);
    if (!passes(method)) method.body.clear();
  }

  // Adjusts `stmt` in place; false when no correction applies.
  bool Correct(const minilang::Interpreter& interp, const FunctionDecl& prefix,
               const RunOutcome& out, Stmt& stmt) {
    if (out.error_kind == minilang::ErrorKind::kUndefinedFunction) {
      for (const auto& fn : program_.functions) {
        if (EditDistance(fn.name, out.undefined_name) == 1) {
          Rename(stmt, out.undefined_name, fn.name);
          return true;
        }
      }
      return false;
    }
    if (stmt.kind != Stmt::Kind::kExpr || !stmt.expr ||
        stmt.expr->kind != Expr::Kind::kCall ||
        !minilang::IsAssertion(stmt.expr->text) ||
        stmt.expr->operands.empty()) {
      return false;
    }
    FunctionDecl probe = prefix;
    probe.body.push_back(ReturnOf(stmt.expr->operands[0]));
    const RunOutcome actual = interp.RunMethod(probe, kProbeBudget);
    if (actual.status != RunStatus::kPass) return false;
    Expr& call = *stmt.expr;
    if (call.text == "assert_eq" && call.operands.size() == 2 &&
        !std::holds_alternative<minilang::Unit>(actual.result)) {
      call.operands[1] = minilang::ValueLiteral(actual.result);
      return true;
    }
    if (const auto* b = std::get_if<bool>(&actual.result);
        b != nullptr && call.operands.size() == 1) {
      call.text = *b ? "assert_true" : "assert_false";
      return true;
    }
    return false;
  }

  static void Rename(Expr& e, const std::string& from, const std::string& to) {
    if (e.kind == Expr::Kind::kCall && e.text == from) e.text = to;
    for (auto& op : e.operands) Rename(op, from, to);
  }

  static void Rename(Stmt& stmt, const std::string& from,
                     const std::string& to) {
    if (stmt.expr) Rename(*stmt.expr, from, to);
    for (auto& s : stmt.body) Rename(s, from, to);
    for (auto& s : stmt.else_body) Rename(s, from, to);
  }

  const Program& program_;
  const MockOptions& options_;
  Rng& rng_;
  const minilang::Interpreter interp_;
  const Inputs inputs_;
  std::vector<const FunctionDecl*> focal_;
};

std::vector<Target> ParseTargets(const Program& program,
                                 std::string_view content) {
  std::vector<Target> targets;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    Target t;
    std::string location;
    std::string arm;
    std::istringstream fields(line);
    std::string tag;
    std::string kind;
    fields >> tag >> kind >> location >> arm;
    if (tag != "MISSED") continue;
    const size_t colon = location.rfind(':');
    if (colon == std::string::npos) continue;
    t.function = location.substr(0, colon);
    try {
      t.line = std::stoi(location.substr(colon + 1));
    } catch (const std::exception&) {
      continue;
    }
    if (kind == "LINE") {
      targets.push_back(t);
    } else if (kind == "BRANCH") {
      t.is_branch = true;
      t.arm = arm == "arm=else" ? minilang::Arm::kElse : minilang::Arm::kThen;
      for (const auto& [id, info] : program.branch_index) {
        if (info.function == t.function && info.line == t.line) {
          t.branch_id = id;
          targets.push_back(t);
        }
      }
    }
  }
  return targets;
}

}  // namespace

CompletionResponse MockBackend::Complete(const CompletionRequest& request) {
  Rng rng(MixSeeds(options_.seed, request.seed, Fnv1a64(request.template_id),
                   Fnv1a64(request.user_content)));
  CompletionResponse response;
  response.backend = "mock";

  const auto source = ExtractFenced(request.user_content, kProgramFence);
  if (!source) return response;
  Program program;
  try {
    program = minilang::ParseProgram(*source);
  } catch (const minilang::ParseError&) {
    return response;
  }
  Writer writer(program, options_, rng);
  const std::string& id = request.template_id;
  if (id.starts_with("gen_")) {
    response.text = writer.Generate(StyleFor(id));
  } else if (id == TemplateName(TemplateId::kRepair)) {
    response.text = writer.Repair(
        ExtractFenced(request.user_content, kTestFence).value_or(""));
  } else if (id == TemplateName(TemplateId::kCoverageEnhance)) {
    response.text =
        writer.Enhance(ParseTargets(program, request.user_content));
  } else if (id == TemplateName(TemplateId::kMutator)) {
    response.text = writer.Mutate(
        ExtractFenced(request.user_content, kTestFence, 0).value_or(""),
        ExtractFenced(request.user_content, kTestFence, 1).value_or(""));
  }
  return response;
}

CompletionResponse IdentityBackend::Complete(
    const CompletionRequest& request) {
  CompletionResponse response;
  response.backend = "identity";
  if (request.template_id == TemplateName(TemplateId::kMutator)) {
    response.text =
        ExtractFenced(request.user_content, kTestFence).value_or("");
  }
  return response;
}

}  // namespace evotest::llm
