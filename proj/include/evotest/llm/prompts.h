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

#ifndef EVOTEST_LLM_PROMPTS_H_
#define EVOTEST_LLM_PROMPTS_H_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evotest::llm {

enum class TemplateId {
  kGenA1,
  kGenA2,
  kGenA3,
  kGenA4,
  kGenA5,
  kRepair,
  kCoverageEnhance,
  kMutator,
};

// "gen_A1" ... "gen_A5", "repair", "coverage_enhance", "mutator".
std::string_view TemplateName(TemplateId id);
std::optional<TemplateId> ParseTemplateName(std::string_view name);
const std::vector<TemplateId>& AllTemplates();

// A prompt is a fixed system part plus a user part with {name} placeholders.
// The repair template has no system text of its own: it continues the
// conversation of the agent that produced the suite.
struct PromptTemplate {
  TemplateId id;
  std::string_view system;
  std::string_view user;
  // Placeholders that may be bound to empty text.
  std::set<std::string> optional;
};

const PromptTemplate& GetTemplate(TemplateId id);

// Placeholder names in order of first appearance.
std::vector<std::string> Placeholders(std::string_view body);

class TemplateError : public std::runtime_error {
 public:
  explicit TemplateError(std::vector<std::string> missing);

  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

using Bindings = std::map<std::string, std::string>;

// Substitutes every {name}. A placeholder that is unbound, or bound to empty
// text without being listed in `optional`, is missing; all missing names are
// reported together.
std::string Render(std::string_view body, const Bindings& bindings,
                   const std::set<std::string>& optional = {});

struct RenderedPrompt {
  std::string system;
  std::string user;
};

RenderedPrompt RenderPrompt(TemplateId id, const Bindings& bindings);

// Code fences used in user content. Program source sits in a ```mini fence,
// test code in a ```test fence.
inline constexpr std::string_view kProgramFence = "```mini";
inline constexpr std::string_view kTestFence = "```test";

// Body of the `occurrence`-th (0-based) fence opened by `fence`, if any.
std::optional<std::string> ExtractFenced(std::string_view text,
                                         std::string_view fence,
                                         int occurrence = 0);

// Test code from a model reply: the first fenced block if the reply uses
// markdown anyway, else the whole reply.
std::string ExtractCode(std::string_view reply);

}  // namespace evotest::llm

#endif  // EVOTEST_LLM_PROMPTS_H_
