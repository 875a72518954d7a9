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

#ifndef EVOTEST_LLM_AGENTS_H_
#define EVOTEST_LLM_AGENTS_H_

#include <string>
#include <string_view>
#include <vector>

#include "evotest/llm/prompts.h"

namespace evotest::llm {

struct AgentConfig {
  std::string agent_id;
  double temperature = 0.0;
  TemplateId system_prompt = TemplateId::kGenA1;
  std::string purpose;
};

// A1..A5 in order.
const std::vector<AgentConfig>& DefaultAgents();

// Throws std::out_of_range for an unknown id.
const AgentConfig& FindAgent(std::string_view agent_id);

// Temperature used by the mutation agent.
inline constexpr double kMutatorTemperature = 0.5;

}  // namespace evotest::llm

#endif  // EVOTEST_LLM_AGENTS_H_
