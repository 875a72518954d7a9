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

#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evotest/app/app.h"
#include "evotest/llm/prompts.h"
#include "evotest/minilang/parser.h"

namespace py = pybind11;

namespace evotest {
namespace {

py::dict ProgramSummary(const std::string& source, const std::string& path) {
  const minilang::Program program = minilang::ParseProgram(source, path);
  py::list functions, focal;
  for (const auto& fn : program.functions) {
    functions.append(fn.name);
    if (fn.is_focal) focal.append(fn.name);
  }
  py::dict out;
  out["functions"] = functions;
  out["focal_functions"] = focal;
  out["statements"] = program.StatementCount();
  out["branches"] = program.BranchCount();
  return out;
}

std::string ScoreJson(const std::string& program_path,
                      const std::string& suite_path, int64_t step_budget) {
  const app::ScoreResult r = app::Score(program_path, suite_path, step_budget);
  nlohmann::json j = app::FitnessJson(r.detail.score);
  j["size"] = {{"methods", r.size.method_count},
               {"statements", r.size.statement_count}};
  j["passing"] = r.detail.passing;
  return j.dump();
}

std::string RunJson(const std::string& config_json) {
  const app::RunConfig config =
      app::ConfigFromJson(nlohmann::json::parse(config_json));
  py::gil_scoped_release release;
  return app::Run(config).report.dump();
}

py::tuple RenderPrompt(const std::string& name, const llm::Bindings& bindings) {
  const auto id = llm::ParseTemplateName(name);
  if (!id) throw py::value_error("unknown template: " + name);
  const llm::RenderedPrompt p = llm::RenderPrompt(*id, bindings);
  return py::make_tuple(p.system, p.user);
}

}  // namespace
}  // namespace evotest

PYBIND11_MODULE(_core, m) {
  using namespace evotest;
  m.doc() = "Native core of the evotest test generator";

  py::register_exception<app::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<minilang::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<llm::TemplateError>(m, "TemplateError", PyExc_KeyError);

  m.def("parse_program", &ProgramSummary, py::arg("source"),
        py::arg("path") = "program.mini");
  m.def("fitness_scalar", &suite::FitnessScalar, py::arg("bcct"),
        py::arg("lcct"), py::arg("msct"));
  m.def("score_json", &ScoreJson, py::arg("program_path"),
        py::arg("suite_path"),
        py::arg("step_budget") = minilang::kDefaultStepBudget);
  m.def("mutants", &app::MutantListing, py::arg("program_path"),
        py::arg("focal_only") = true);
  m.def("run_json", &RunJson, py::arg("config_json"));
  m.def("render_prompt", &RenderPrompt, py::arg("template"),
        py::arg("bindings"));
  m.attr("REPORT_SCHEMA_VERSION") = app::kReportSchemaVersion;
}
