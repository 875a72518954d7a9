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

#ifndef EVOTEST_LLM_GATEWAY_H_
#define EVOTEST_LLM_GATEWAY_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evotest::llm {

struct CompletionRequest {
  // Catalog name of the template that produced the content, e.g. "gen_A3".
  std::string template_id;
  std::string system_prompt;
  std::string user_content;
  double temperature = 0.0;
  int max_retries = 3;
  // Sampling seed forwarded to the backend; distinguishes repeated samples
  // of the same prompt.
  uint64_t seed = 0;
};

struct CompletionResponse {
  std::string text;
  std::string backend;
  double latency_seconds = 0.0;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  // Attempts made, including the successful one.
  int attempts = 1;
};

// The remote endpoint could not be reached or kept failing after retries.
class RemoteUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The endpoint rejected the credentials (HTTP 401 or 403).
class AuthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Backend {
 public:
  virtual ~Backend() = default;

  // Must be safe to call from several threads at once.
  virtual CompletionResponse Complete(const CompletionRequest& request) = 0;
  virtual std::string_view name() const = 0;
};

// Front door for all model calls: bounds the number of calls in flight and
// counts them.
class Gateway {
 public:
  static constexpr int kDefaultInFlightCap = 8;

  explicit Gateway(std::shared_ptr<Backend> backend,
                   int in_flight_cap = kDefaultInFlightCap);

  CompletionResponse Complete(const CompletionRequest& request);

  int64_t call_count() const { return calls_.load(); }
  int64_t failure_count() const { return failures_.load(); }
  int max_in_flight_observed() const { return max_in_flight_.load(); }
  int in_flight_cap() const { return cap_; }
  Backend& backend() { return *backend_; }

 private:
  std::shared_ptr<Backend> backend_;
  const int cap_;
  std::mutex mu_;
  std::condition_variable slot_free_;
  int in_flight_ = 0;
  std::atomic<int> max_in_flight_{0};
  std::atomic<int64_t> calls_{0};
  std::atomic<int64_t> failures_{0};
};

}  // namespace evotest::llm

#endif  // EVOTEST_LLM_GATEWAY_H_
