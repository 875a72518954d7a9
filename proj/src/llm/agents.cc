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

#include "evotest/llm/agents.h"

#include <stdexcept>

namespace evotest::llm {

const std::vector<AgentConfig>& DefaultAgents() {
  static const auto* agents = new std::vector<AgentConfig>{
      {"A1", 0.3, TemplateId::kGenA1, "Standard unit testing"},
      {"A2", 0.6, TemplateId::kGenA2, "Emphasize assertion diversity"},
      {"A3", 0.8, TemplateId::kGenA3, "'Try hard' creative agent"},
      {"A4", 0.5, TemplateId::kGenA4, "Focus on edge conditions"},
      {"A5", 0.4, TemplateId::kGenA5, "Uses long object chains"},
  };
  return *agents;
}

const AgentConfig& FindAgent(std::string_view agent_id) {
  for (const auto& agent : DefaultAgents()) {
    if (agent.agent_id == agent_id) return agent;
  }
  throw std::out_of_range("unknown agent: " + std::string(agent_id));
}

}  // namespace evotest::llm
