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

#ifndef EVOTEST_LLM_REMOTE_BACKEND_H_
#define EVOTEST_LLM_REMOTE_BACKEND_H_

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evotest/llm/gateway.h"

namespace evotest::llm {

// Environment variable holding the API key. Keys are never read from flags
// or config files.
inline constexpr const char* kApiKeyEnv = "EVOTEST_API_KEY";

struct HttpResponse {
  int status = 0;  // 0 when the request never got a response
  std::string body;
  std::string error;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const std::string& url, const std::string& body,
                            const HttpHeaders& headers) = 0;
};

// Transport over cpp-httplib; https URLs need the TLS build.
std::unique_ptr<HttpTransport> MakeHttpTransport(double timeout_seconds);

struct RemoteOptions {
  // Full chat-completions URL, e.g. https://host/v1/chat/completions.
  std::string endpoint;
  std::string model;
  std::string api_key;
  double backoff_base_seconds = 1.0;  // doubles per retry
  double jitter = 0.2;                // +/- fraction of each delay
  double timeout_seconds = 120.0;
};

// Chat-completions request body for `request`.
std::string BuildRequestBody(const RemoteOptions& options,
                             const CompletionRequest& request);

// Backoff before retry `retry` (0-based), jittered deterministically from
// the request seed.
double BackoffSeconds(const RemoteOptions& options, uint64_t seed, int retry);

class RemoteBackend : public Backend {
 public:
  using Sleeper = std::function<void(double seconds)>;

  RemoteBackend(RemoteOptions options, std::shared_ptr<HttpTransport> transport,
                Sleeper sleeper = {});

  // Retries transport failures, HTTP 429 and 5xx up to request.max_retries
  // times. Throws AuthError on 401/403 without retrying and
  // RemoteUnavailable otherwise.
  CompletionResponse Complete(const CompletionRequest& request) override;
  std::string_view name() const override { return "remote"; }

 private:
  RemoteOptions options_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
};

}  // namespace evotest::llm

#endif  // EVOTEST_LLM_REMOTE_BACKEND_H_
