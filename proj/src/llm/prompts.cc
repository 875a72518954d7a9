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

#include "evotest/llm/prompts.h"

#include <algorithm>
#include <cctype>

namespace evotest::llm {
namespace {

constexpr std::string_view kGenA1System = R"(You act as a unit test case generator, with meaningful assertions for MiniLang programs. Your task is to generate a MiniLang test file (`test` functions using assert_eq, assert_true and assert_false) for MiniLang programs.

I will provide the following information of the focal method:

1. A list of the focal functions to test.
2. The source code of the functions.

You are required to:

1. Cover as many branches as possible in the "focal method" (Branch Coverage).
2. Write the meaningful assertions.
3. If you suspect a section of the code to be vulnerable to mutations, write a meaningful assertion or whole test to catch it.
4. Do not redefine any function of the program under test.
5. Ensure the test file parses without errors.
6. Write tests ONLY for the focal functions in the provided list.
7. *All helper functions used within the test must be declared with `fn` in the test file. Do not declare helpers with `test`.*
8. Output the unit test code without markdown formatting (```mini).

No additional explanations required.)";

constexpr std::string_view kGenA2System = R"(You act as a unit test case generator, with meaningful assertions for MiniLang programs.

Your task is to generate a MiniLang test file (`test` functions using assert_eq, assert_true and assert_false) for MiniLang programs.

I will provide the following information of the focal method:

1. A list of the focal functions to test.
2. The source code of the functions.

You are required to:

1. Cover all reachable branches, but prioritize writing multiple strong and diverse assertions that verify:
   - Return values
   - Intermediate values held in test variables
   - Results of related calls on the same inputs
2. Maximize the use of assertions in every test case, checking both normal and edge values.
3. If you suspect a section of the code to be vulnerable to mutations, write a meaningful assertion or whole test to catch it.
4. Do not redefine any function of the program under test.
5. Ensure the test file parses without errors.
6. Write tests ONLY for the focal functions in the provided list.
7. *All helper functions used within the test must be declared with `fn` in the test file. Do not declare helpers with `test`.*
8. Output the unit test code without markdown formatting (```mini).

No additional explanations required.)";

constexpr std::string_view kGenA3System = R"(You act as a unit test case generator, with meaningful assertions for MiniLang programs. Your task is to generate a MiniLang test file (`test` functions using assert_eq, assert_true and assert_false) for MiniLang programs.

I will provide the following information of the focal method:

1. A list of the focal functions to test.
2. The source code of the functions.

You are required to:

1. Cover reachable branches, but focus primarily on bug-catching logic.
2. Write the meaningful assertions.
3. Analyze the method for sections that may be prone to logic errors, misuse of conditionals, or potential edge case failures. Write full test cases specifically to **expose potential bugs**, even if coverage is low.
4. Do not redefine any function of the program under test.
5. Ensure the test file parses without errors.
6. Write tests ONLY for the focal functions in the provided list.
7. *All helper functions used within the test must be declared with `fn` in the test file. Do not declare helpers with `test`.*
8. Output the unit test code without markdown formatting (```mini).

No additional explanations required.)";

constexpr std::string_view kGenA4System = R"(You act as a unit test case generator, with meaningful assertions for MiniLang programs. Your task is to generate a MiniLang test file (`test` functions using assert_eq, assert_true and assert_false) for MiniLang programs.

I will provide the following information of the focal method:

1. A list of the focal functions to test.
2. The source code of the functions.

You are required to:

1. Focus on edge cases and boundary values that may trigger hidden bugs or exceptional paths. For example: empty strings, zero, negative numbers, min/max ints, single-character strings, etc.
2. Each test should target one edge condition at a time.
3. If you suspect a section of the code to contain bugs, write a meaningful assertion or whole test to catch it.
4. Do not redefine any function of the program under test.
5. Ensure the test file parses without errors.
6. Write tests ONLY for the focal functions in the provided list.
7. *All helper functions used within the test must be declared with `fn` in the test file. Do not declare helpers with `test`.*
8. Output the unit test code without markdown formatting (```mini).

No additional explanations required.)";

constexpr std::string_view kGenA5System = R"(You act as a unit test case generator, with meaningful assertions for MiniLang programs. Your task is to generate a MiniLang test file (`test` functions using assert_eq, assert_true and assert_false) for MiniLang programs.

I will provide the following information of the focal method:
1. A list of the focal functions to test.
2. The source code of the functions.

You are required to:
1. Cover **as many branches as possible** in the focal method using the fewest number of test cases.
2. Write exactly one assertion per test method - pick the one that validates the key condition.
3. Avoid redundant or overly detailed checks unless necessary for coverage.
4. Do not redefine any function of the program under test.
5. Ensure the test file parses without errors.
6. Write tests ONLY for the focal functions in the provided list.
7. *All helper functions used within the test must be declared with `fn` in the test file. Do not declare helpers with `test`.*
8. Output the unit test code without markdown formatting (```mini).

No additional explanations required.)";

constexpr std::string_view kGenUser = R"(Focal functions:
{focal_methods}

Source code:
```mini
{source_code}
```
)";

constexpr std::string_view kRepairUser = R"(The generated test suite has encountered an error:

{stacktrace}

Modify the test code to fix it

```test
{test_suite}
```

Source code under test:
```mini
{source_code}
```
)";

constexpr std::string_view kCoverageSystem = R"(You are an AI Test Generation Agent responsible for improving test coverage by writing unit tests with meaningful assertions for MiniLang programs.
Your goal is to maximize branch coverage and line coverage by targeting untested or partially tested methods and missing branches.

* The following test coverage report has been generated by the MiniLang interpreter.

* You will receive coverage metrics for the tested focal methods, including branch coverage and line coverage percentages.

* Additionally, you will receive specific lines of code where missed branches occur, and the exact branch. Your instructions are the following:
1. Prioritize writing tests for low coverage methods
2. Use the missed branches report to create tests cases that exercise these code paths.
3. Generate a full MiniLang test file.
4. Do not redefine any function of the program under test.
5. The name of every test function should end with the suffix _enhanced. E.g for classify it'd be test classify_enhanced
6. Ensure the test file parses without errors.
7. *All helper functions used within the test must be declared with `fn` in the test file. Do not declare helpers with `test`.*
8. Output the unit test code without markdown formatting (```mini).
No additional explanations required.)";

constexpr std::string_view kCoverageUser = R"(Coverage report:
{coverage_report}

Focal functions:
{focal_methods}

Source code:
```mini
{source_code}
```
)";

constexpr std::string_view kMutatorSystem = R"(You are a mutation agent for evolutionary unit test generation.

Your role is to enhance the robustness of MiniLang unit test functions by intelligently adding new assertions. These additional assertions should verify more properties of the system under test (SUT), including outputs, values held in test variables, or results of related calls.

Follow these strict guidelines:

1. Preserve the original logic of the test. Do **not** modify or remove existing code.
2. Add **1 to 5 new assertions** that enhance the strength of the test by:
   - Checking additional return values.
   - Inspecting values already stored in test variables.
   - Validating results at neighbouring inputs (e.g., boundary values).
3. Prefer using **existing variables** in the test.
4. If a needed value is missing, you **may introduce new `let` bindings** within the test function, but only if:
   - They are directly relevant to additional assertions.
   - They do not significantly change the original test's intent.
5. You may use the built-in assertions (`assert_eq`, `assert_true`, `assert_false`).
6. Maintain consistent code style and indentation.
7. Do not explain the code. Only output the updated MiniLang test function.

You will be provided:

- The original MiniLang test function to mutate.
- The source code of the program under test.
- Optional helper functions used in the test.

Your output must be the **full, modified MiniLang test function, with the `test` keyword**, with the added assertions inserted logically and consistently within the function body. Output the test function code without markdown formatting (```mini).)";

constexpr std::string_view kMutatorUser = R"(Test function to mutate:
```test
{test_method}
```

Source code of the program under test:
```mini
{source_code}
```

Helper functions:
```test
{helpers}
```
)";

const std::vector<PromptTemplate>& Catalog() {
  static const auto* catalog = new std::vector<PromptTemplate>{
      {TemplateId::kGenA1, kGenA1System, kGenUser, {}},
      {TemplateId::kGenA2, kGenA2System, kGenUser, {}},
      {TemplateId::kGenA3, kGenA3System, kGenUser, {}},
      {TemplateId::kGenA4, kGenA4System, kGenUser, {}},
      {TemplateId::kGenA5, kGenA5System, kGenUser, {}},
      {TemplateId::kRepair, "", kRepairUser, {}},
      {TemplateId::kCoverageEnhance, kCoverageSystem, kCoverageUser, {}},
      {TemplateId::kMutator, kMutatorSystem, kMutatorUser, {"helpers"}},
  };
  return *catalog;
}

bool IsPlaceholderChar(char c) {
  return std::islower(static_cast<unsigned char>(c)) || c == '_';
}

// Calls `literal` for text runs and `placeholder` for each {name}.
template <typename Literal, typename Placeholder>
void Scan(std::string_view body, Literal literal, Placeholder placeholder) {
  size_t i = 0;
  while (i < body.size()) {
    const size_t open = body.find('{', i);
    if (open == std::string_view::npos) break;
    size_t close = open + 1;
    while (close < body.size() && IsPlaceholderChar(body[close])) ++close;
    if (close < body.size() && body[close] == '}' && close > open + 1) {
      literal(body.substr(i, open - i));
      placeholder(std::string(body.substr(open + 1, close - open - 1)));
      i = close + 1;
    } else {
      literal(body.substr(i, open + 1 - i));
      i = open + 1;
    }
  }
  literal(body.substr(i));
}

std::string JoinNames(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

std::string_view TemplateName(TemplateId id) {
  switch (id) {
    case TemplateId::kGenA1:
      return "gen_A1";
    case TemplateId::kGenA2:
      return "gen_A2";
    case TemplateId::kGenA3:
      return "gen_A3";
    case TemplateId::kGenA4:
      return "gen_A4";
    case TemplateId::kGenA5:
      return "gen_A5";
    case TemplateId::kRepair:
      return "repair";
    case TemplateId::kCoverageEnhance:
      return "coverage_enhance";
    case TemplateId::kMutator:
      return "mutator";
  }
  return "?";
}

const std::vector<TemplateId>& AllTemplates() {
  static const auto* ids = new std::vector<TemplateId>{
      TemplateId::kGenA1,  TemplateId::kGenA2,  TemplateId::kGenA3,
      TemplateId::kGenA4,  TemplateId::kGenA5,  TemplateId::kRepair,
      TemplateId::kCoverageEnhance, TemplateId::kMutator};
  return *ids;
}

std::optional<TemplateId> ParseTemplateName(std::string_view name) {
  for (const TemplateId id : AllTemplates()) {
    if (TemplateName(id) == name) return id;
  }
  return std::nullopt;
}

const PromptTemplate& GetTemplate(TemplateId id) {
  return Catalog().at(static_cast<size_t>(id));
}

std::vector<std::string> Placeholders(std::string_view body) {
  std::vector<std::string> names;
  Scan(
      body, [](std::string_view) {},
      [&](std::string name) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
          names.push_back(std::move(name));
        }
      });
  return names;
}

TemplateError::TemplateError(std::vector<std::string> missing)
    : std::runtime_error("unbound template placeholders: " +
                         JoinNames(missing)),
      missing_(std::move(missing)) {}

std::string Render(std::string_view body, const Bindings& bindings,
                   const std::set<std::string>& optional) {
  std::vector<std::string> missing;
  for (const auto& name : Placeholders(body)) {
    auto it = bindings.find(name);
    const bool unbound = it == bindings.end() ||
                         (it->second.empty() && !optional.contains(name));
    if (unbound) missing.push_back(name);
  }
  if (!missing.empty()) throw TemplateError(std::move(missing));

  std::string out;
  Scan(
      body, [&](std::string_view text) { out += text; },
      [&](const std::string& name) { out += bindings.at(name); });
  return out;
}

RenderedPrompt RenderPrompt(TemplateId id, const Bindings& bindings) {
  const PromptTemplate& t = GetTemplate(id);
  return {std::string(t.system), Render(t.user, bindings, t.optional)};
}

std::optional<std::string> ExtractFenced(std::string_view text,
                                         std::string_view fence,
                                         int occurrence) {
  size_t pos = 0;
  for (int seen = 0;; ++seen) {
    const size_t open = text.find(fence, pos);
    if (open == std::string_view::npos) return std::nullopt;
    const size_t line_end = text.find('\n', open);
    if (line_end == std::string_view::npos) return std::nullopt;
    size_t close = text.find("\n```", line_end);
    if (close == std::string_view::npos) close = text.size();
    if (seen == occurrence) {
      return std::string(text.substr(line_end + 1, close - line_end - 1));
    }
    pos = close + 1;
    // Skip past the closing fence line.
    const size_t after = text.find('\n', pos);
    pos = after == std::string_view::npos ? text.size() : after;
  }
}

std::string ExtractCode(std::string_view reply) {
  if (auto fenced = ExtractFenced(reply, "```")) return *fenced;
  return std::string(reply);
}

}  // namespace evotest::llm
