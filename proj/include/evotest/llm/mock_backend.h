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

#ifndef EVOTEST_LLM_MOCK_BACKEND_H_
#define EVOTEST_LLM_MOCK_BACKEND_H_

#include <cstdint>
#include <string_view>

#include "evotest/llm/gateway.h"

namespace evotest::llm {

// Knobs of the offline model. Rates are per emitted item unless noted.
struct MockOptions {
  uint64_t seed = 0;
  // Assertion whose expected value is deliberately off.
  double wrong_expectation_rate = 0.10;
  // Call whose function name is misspelled by one character.
  double typo_rate = 0.05;
  // Reply whose text does not parse (per reply).
  double malformed_rate = 0.03;
  // Chance that a repair request fixes a failing method (or, for a reply
  // that did not parse, the whole file).
  double repair_success_rate = 0.7;
  // Call whose result is bound to a variable but never asserted.
  double weak_assertion_rate = 0.3;
  // Test that calls the program through a helper function (per test).
  double helper_rate = 0.15;
  // Candidate inputs tried per coverage enhancement request.
  int enhance_probes = 12;
  // Upper bound on tests emitted per coverage enhancement request.
  int enhance_max_tests = 2;
};

// Deterministic stand-in for a chat model. It reads the program and tests
// out of the fenced blocks of the user content and answers with MiniLang
// test code whose expected values come from running the program. The reply
// is a pure function of the options, the request seed, the template id and
// the user content.
class MockBackend : public Backend {
 public:
  explicit MockBackend(MockOptions options) : options_(options) {}

  CompletionResponse Complete(const CompletionRequest& request) override;
  std::string_view name() const override { return "mock"; }
  const MockOptions& options() const { return options_; }

 private:
  MockOptions options_;
};

// Echoes the test method of a mutator request unchanged and returns an
// empty file for every other request.
class IdentityBackend : public Backend {
 public:
  CompletionResponse Complete(const CompletionRequest& request) override;
  std::string_view name() const override { return "identity"; }
};

}  // namespace evotest::llm

#endif  // EVOTEST_LLM_MOCK_BACKEND_H_
