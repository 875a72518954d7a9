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

#include "evotest/llm/remote_backend.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#ifdef EVOTEST_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "evotest/util/hash.h"

namespace evotest::llm {
namespace {

using nlohmann::json;

class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(double timeout_seconds)
      : timeout_(timeout_seconds) {}

  HttpResponse Post(const std::string& url, const std::string& body,
                    const HttpHeaders& headers) override {
    // Split "scheme://host[:port]/path".
    const size_t scheme_end = url.find("://");
    const size_t path_start =
        url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin =
        path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    HttpResponse out;
    try {
      httplib::Client client(origin);
      const auto secs = static_cast<time_t>(timeout_);
      client.set_connection_timeout(secs);
      client.set_read_timeout(secs);
      client.set_write_timeout(secs);
      httplib::Headers h;
      for (const auto& [k, v] : headers) h.emplace(k, v);
      auto res = client.Post(path, h, body, "application/json");
      if (!res) {
        out.error = httplib::to_string(res.error());
        return out;
      }
      out.status = res->status;
      out.body = res->body;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    return out;
  }

 private:
  double timeout_;
};

bool Retryable(const HttpResponse& r) {
  return r.status == 0 || r.status == 429 || r.status >= 500;
}

}  // namespace

std::unique_ptr<HttpTransport> MakeHttpTransport(double timeout_seconds) {
  return std::make_unique<HttplibTransport>(timeout_seconds);
}

std::string BuildRequestBody(const RemoteOptions& options,
                             const CompletionRequest& request) {
  json messages = json::array();
  if (!request.system_prompt.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user_content}});
  json body = {{"model", options.model},
               {"messages", messages},
               {"temperature", request.temperature},
               {"seed", request.seed}};
  return body.dump();
}

double BackoffSeconds(const RemoteOptions& options, uint64_t seed, int retry) {
  const double base = options.backoff_base_seconds * std::pow(2.0, retry);
  const uint64_t h = MixSeeds(seed, static_cast<uint64_t>(retry));
  const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
  return base * (1.0 + options.jitter * (2.0 * unit - 1.0));
}

RemoteBackend::RemoteBackend(RemoteOptions options,
                             std::shared_ptr<HttpTransport> transport,
                             Sleeper sleeper)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)) {
  if (!sleeper_) {
    sleeper_ = [](double s) {
      std::this_thread::sleep_for(std::chrono::duration<double>(s));
    };
  }
}

CompletionResponse RemoteBackend::Complete(const CompletionRequest& request) {
  const std::string body = BuildRequestBody(options_, request);
  const HttpHeaders headers = {
      {"Authorization", "Bearer " + options_.api_key},
      {"Content-Type", "application/json"}};
  const auto start = std::chrono::steady_clock::now();
  std::string last_error;
  const int attempts = 1 + std::max(0, request.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const double delay = BackoffSeconds(options_, request.seed, attempt - 1);
      spdlog::debug("retrying {} in {:.2f}s after: {}", request.template_id,
                    delay, last_error);
      sleeper_(delay);
    }
    const HttpResponse r = transport_->Post(options_.endpoint, body, headers);
    if (r.status == 401 || r.status == 403) {
      throw AuthError("endpoint rejected credentials (HTTP " +
                      std::to_string(r.status) + ")");
    }
    if (Retryable(r)) {
      last_error = r.status == 0 ? "transport error: " + r.error
                                 : "HTTP " + std::to_string(r.status);
      continue;
    }
    if (r.status < 200 || r.status >= 300) {
      throw RemoteUnavailable("HTTP " + std::to_string(r.status) + ": " +
                              r.body.substr(0, 200));
    }
    CompletionResponse response;
    try {
      const json parsed = json::parse(r.body);
      response.text =
          parsed.at("choices").at(0).at("message").at("content").get<std::string>();
      if (parsed.contains("usage")) {
        const json& usage = parsed["usage"];
        response.prompt_tokens = usage.value("prompt_tokens", 0);
        response.completion_tokens = usage.value("completion_tokens", 0);
      }
    } catch (const json::exception& e) {
      throw RemoteUnavailable(std::string("malformed completion response: ") +
                              e.what());
    }
    response.backend = "remote";
    response.attempts = attempt + 1;
    response.latency_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return response;
  }
  throw RemoteUnavailable("gave up after " + std::to_string(attempts) +
                          " attempts: " + last_error);
}

}  // namespace evotest::llm
