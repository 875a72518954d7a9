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

#include <atomic>
#include <chrono>
#include <future>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "evotest/genesis/genesis.h"
#include "evotest/llm/agents.h"
#include "evotest/llm/gateway.h"
#include "evotest/llm/mock_backend.h"
#include "evotest/llm/prompts.h"
#include "evotest/llm/remote_backend.h"
#include "evotest/minilang/parser.h"
#include "evotest/suite/test_suite.h"
#include "test_util.h"

namespace evotest::llm {
namespace {

TEST(AgentsTest, ConfigurationTable) {
  // Temperatures and strategies as published for the five agents.
  const auto& agents = DefaultAgents();
  ASSERT_EQ(agents.size(), 5u);
  const std::vector<std::tuple<std::string, double, std::string>> expected = {
      {"A1", 0.3, "Standard unit testing"},
      {"A2", 0.6, "Emphasize assertion diversity"},
      {"A3", 0.8, "'Try hard' creative agent"},
      {"A4", 0.5, "Focus on edge conditions"},
      {"A5", 0.4, "Uses long object chains"},
  };
  for (size_t i = 0; i < agents.size(); ++i) {
    EXPECT_EQ(agents[i].agent_id, std::get<0>(expected[i]));
    EXPECT_DOUBLE_EQ(agents[i].temperature, std::get<1>(expected[i]));
    EXPECT_EQ(agents[i].purpose, std::get<2>(expected[i]));
    EXPECT_EQ(TemplateName(agents[i].system_prompt),
              "gen_" + agents[i].agent_id);
  }
  EXPECT_DOUBLE_EQ(kMutatorTemperature, 0.5);
  EXPECT_THROW(FindAgent("A9"), std::out_of_range);
}

TEST(PromptsTest, CatalogNamesRoundTrip) {
  for (const TemplateId id : AllTemplates()) {
    EXPECT_EQ(ParseTemplateName(TemplateName(id)), id);
  }
  EXPECT_EQ(AllTemplates().size(), 8u);
  EXPECT_FALSE(ParseTemplateName("gen_A6").has_value());
}

TEST(PromptsTest, PlaceholdersPerTemplate) {
  EXPECT_EQ(Placeholders(GetTemplate(TemplateId::kGenA3).user),
            (std::vector<std::string>{"focal_methods", "source_code"}));
  EXPECT_EQ(Placeholders(GetTemplate(TemplateId::kRepair).user),
            (std::vector<std::string>{"stacktrace", "test_suite", "source_code"}));
  EXPECT_EQ(Placeholders(GetTemplate(TemplateId::kCoverageEnhance).user),
            (std::vector<std::string>{"coverage_report", "focal_methods",
                                      "source_code"}));
  EXPECT_EQ(Placeholders(GetTemplate(TemplateId::kMutator).user),
            (std::vector<std::string>{"test_method", "source_code", "helpers"}));
}

TEST(PromptsTest, RepairCarriesTraceVerbatim) {
  const std::string trace = "ERROR runtime_error at t.test.mini:3:5 in t1";
  const RenderedPrompt p = RenderPrompt(
      TemplateId::kRepair,
      {{"stacktrace", trace}, {"test_suite", "test t1() {}"},
       {"source_code", "fn f() { return 1; }"}});
  EXPECT_NE(p.user.find(trace), std::string::npos);
  EXPECT_NE(p.user.find("The generated test suite has encountered an error"),
            std::string::npos);
}

TEST(PromptsTest, EmptyFocalListIsAnError) {
  try {
    RenderPrompt(TemplateId::kGenA2,
                 {{"focal_methods", ""}, {"source_code", "fn f() {}"}});
    FAIL();
  } catch (const TemplateError& e) {
    EXPECT_EQ(e.missing(), std::vector<std::string>{"focal_methods"});
  }
}

TEST(PromptsTest, AllMissingNamesReported) {
  try {
    RenderPrompt(TemplateId::kCoverageEnhance, {});
    FAIL();
  } catch (const TemplateError& e) {
    EXPECT_EQ(e.missing().size(), 3u);
  }
}

TEST(PromptsTest, MutatorEmbedsMethodVerbatim) {
  const std::string method =
      evotest::testing::ReadFixture("triangle", "suite.test.mini").substr(0, 73);
  const RenderedPrompt p = RenderPrompt(
      TemplateId::kMutator,
      {{"test_method", method}, {"source_code", "fn f() {}"}, {"helpers", ""}});
  EXPECT_NE(p.user.find(method), std::string::npos);
  EXPECT_NE(p.system.find("You are a mutation agent for evolutionary unit test "
                          "generation"),
            std::string::npos);
  EXPECT_NE(p.system.find("1 to 5 new assertions"), std::string::npos);
}

TEST(PromptsTest, SubstitutedTextIsNotRescanned) {
  EXPECT_EQ(Render("a {x} b", {{"x", "{y}"}}), "a {y} b");
  EXPECT_EQ(Render("keep {Upper} and { x }", {}), "keep {Upper} and { x }");
}

TEST(PromptsTest, Fences) {
  const std::string text = "x\n```mini\nfn f() {}\n```\n```test\ntest t() {}\n```\n";
  EXPECT_EQ(ExtractFenced(text, kProgramFence), "fn f() {}");
  EXPECT_EQ(ExtractFenced(text, kTestFence), "test t() {}");
  EXPECT_FALSE(ExtractFenced(text, kTestFence, 1).has_value());
  EXPECT_EQ(ExtractCode("```\ntest t() {}\n```"), "test t() {}");
  EXPECT_EQ(ExtractCode("test t() {}"), "test t() {}");
}

// ----------------------------------------------------------------- gateway

class SlowBackend : public Backend {
 public:
  CompletionResponse Complete(const CompletionRequest& request) override {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    return {request.user_content, "slow"};
  }
  std::string_view name() const override { return "slow"; }
};

TEST(GatewayTest, InFlightCapHolds) {
  Gateway gateway(std::make_shared<SlowBackend>(), 3);
  std::vector<std::future<void>> tasks;
  for (int i = 0; i < 24; ++i) {
    tasks.push_back(std::async(std::launch::async, [&] {
      gateway.Complete(CompletionRequest{});
    }));
  }
  for (auto& t : tasks) t.get();
  EXPECT_EQ(gateway.call_count(), 24);
  EXPECT_LE(gateway.max_in_flight_observed(), 3);
  EXPECT_GE(gateway.max_in_flight_observed(), 1);
}

// ------------------------------------------------------------------ remote

class FakeTransport : public HttpTransport {
 public:
  explicit FakeTransport(std::vector<HttpResponse> script)
      : script_(std::move(script)) {}
  HttpResponse Post(const std::string& url, const std::string& body,
                    const HttpHeaders& headers) override {
    last_url = url;
    last_body = body;
    last_headers = headers;
    const HttpResponse r = script_[std::min(calls, script_.size() - 1)];
    ++calls;
    return r;
  }
  size_t calls = 0;
  std::string last_url, last_body;
  HttpHeaders last_headers;

 private:
  std::vector<HttpResponse> script_;
};

const char* kOkBody =
    R"({"choices":[{"message":{"role":"assistant","content":"test t() {}"}}],)"
    R"("usage":{"prompt_tokens":12,"completion_tokens":5}})";

struct RemoteFixture {
  std::shared_ptr<FakeTransport> transport;
  std::vector<double> sleeps;
  std::unique_ptr<RemoteBackend> backend;

  explicit RemoteFixture(std::vector<HttpResponse> script) {
    transport = std::make_shared<FakeTransport>(std::move(script));
    RemoteOptions options{"https://llm.example/v1/chat/completions", "m",
                          "sk-test"};
    backend = std::make_unique<RemoteBackend>(
        options, transport, [this](double s) { sleeps.push_back(s); });
  }
};

CompletionRequest Req(int max_retries = 3) {
  CompletionRequest r;
  r.template_id = "gen_A1";
  r.system_prompt = "sys";
  r.user_content = "user";
  r.temperature = 0.6;
  r.max_retries = max_retries;
  r.seed = 9;
  return r;
}

TEST(RemoteTest, SuccessParsesContentAndUsage) {
  RemoteFixture f({{200, kOkBody, ""}});
  const auto r = f.backend->Complete(Req());
  EXPECT_EQ(r.text, "test t() {}");
  EXPECT_EQ(r.prompt_tokens, 12);
  EXPECT_EQ(r.completion_tokens, 5);
  EXPECT_EQ(r.attempts, 1);
  EXPECT_EQ(r.backend, "remote");
  const auto body = nlohmann::json::parse(f.transport->last_body);
  EXPECT_EQ(body["model"], "m");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.6);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "user");
  bool has_auth = false;
  for (const auto& [k, v] : f.transport->last_headers) {
    has_auth |= k == "Authorization" && v == "Bearer sk-test";
  }
  EXPECT_TRUE(has_auth);
}

TEST(RemoteTest, AuthErrorIsNotRetried) {
  for (int status : {401, 403}) {
    RemoteFixture f({{status, "", ""}});
    EXPECT_THROW(f.backend->Complete(Req()), AuthError);
    EXPECT_EQ(f.transport->calls, 1u);
    EXPECT_TRUE(f.sleeps.empty());
  }
}

TEST(RemoteTest, RetriesTransientFailuresWithinBudget) {
  RemoteFixture f({{503, "", ""}, {429, "", ""}, {0, "", "refused"}, {200, kOkBody, ""}});
  const auto r = f.backend->Complete(Req(3));
  EXPECT_EQ(r.attempts, 4);
  EXPECT_EQ(f.transport->calls, 4u);
  ASSERT_EQ(f.sleeps.size(), 3u);
  const double base[] = {1.0, 2.0, 4.0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_GE(f.sleeps[i], base[i] * 0.8);
    EXPECT_LE(f.sleeps[i], base[i] * 1.2);
  }
}

TEST(RemoteTest, AtMostOnePlusMaxRetriesRequests) {
  for (int retries : {0, 1, 3, 5}) {
    RemoteFixture f({{500, "", ""}});
    EXPECT_THROW(f.backend->Complete(Req(retries)), RemoteUnavailable);
    EXPECT_EQ(f.transport->calls, static_cast<size_t>(1 + retries));
  }
}

TEST(RemoteTest, ClientErrorsAndBadBodies) {
  RemoteFixture bad_request({{400, "{}", ""}});
  EXPECT_THROW(bad_request.backend->Complete(Req()), RemoteUnavailable);
  EXPECT_EQ(bad_request.transport->calls, 1u);
  RemoteFixture garbage({{200, "not json", ""}});
  EXPECT_THROW(garbage.backend->Complete(Req()), RemoteUnavailable);
}

TEST(RemoteTest, BackoffIsDeterministic) {
  RemoteOptions o;
  EXPECT_DOUBLE_EQ(BackoffSeconds(o, 1, 2), BackoffSeconds(o, 1, 2));
  o.jitter = 0;
  EXPECT_DOUBLE_EQ(BackoffSeconds(o, 5, 0), 1.0);
  EXPECT_DOUBLE_EQ(BackoffSeconds(o, 5, 2), 4.0);
}

TEST(RemoteTest, HttpTransportAgainstLocalServer) {
  httplib::Server server;
  std::atomic<int> hits{0};
  std::string seen_auth;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                ++hits;
                seen_auth = req.get_header_value("Authorization");
                if (hits == 1) {
                  res.status = 502;
                  return;
                }
                res.set_content(kOkBody, "application/json");
              });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  RemoteOptions options{
      "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions", "m",
      "sk-local"};
  options.backoff_base_seconds = 0.01;
  RemoteBackend backend(options, MakeHttpTransport(5));
  const auto r = backend.Complete(Req());
  server.stop();
  loop.join();
  EXPECT_EQ(r.text, "test t() {}");
  EXPECT_EQ(r.attempts, 2);
  EXPECT_EQ(hits.load(), 2);
  EXPECT_EQ(seen_auth, "Bearer sk-local");
}

TEST(RemoteTest, UnreachableEndpointExhaustsRetries) {
  RemoteOptions options{"http://127.0.0.1:1/v1/chat/completions", "m", "k"};
  options.backoff_base_seconds = 0.001;
  RemoteBackend backend(options, MakeHttpTransport(1));
  EXPECT_THROW(backend.Complete(Req(1)), RemoteUnavailable);
}

// -------------------------------------------------------------------- mock

CompletionRequest GenRequest(const std::string& fixture, TemplateId id,
                             uint64_t seed = 0) {
  const std::string source =
      evotest::testing::ReadFixture(fixture, "program.mini");
  const auto program = minilang::ParseProgram(source);
  const RenderedPrompt p = RenderPrompt(
      id, {{"focal_methods", genesis::FocalSignatures(program)},
           {"source_code", source}});
  CompletionRequest r;
  r.template_id = std::string(TemplateName(id));
  r.system_prompt = p.system;
  r.user_content = p.user;
  r.seed = seed;
  return r;
}

MockOptions Seeded(uint64_t seed) {
  MockOptions o;
  o.seed = seed;
  return o;
}

TEST(MockTest, ByteIdenticalAcrossInvocations) {
  MockBackend mock(Seeded(42));
  const auto request = GenRequest("triangle", TemplateId::kGenA1);
  const std::string first = mock.Complete(request).text;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(mock.Complete(request).text, first);
  MockBackend again(Seeded(42));
  EXPECT_EQ(again.Complete(request).text, first);
}

TEST(MockTest, SeedsDiverge) {
  const auto request = GenRequest("triangle", TemplateId::kGenA3);
  int collisions = 0;
  for (uint64_t s = 0; s < 1000; ++s) {
    MockBackend a(Seeded(s)), b(Seeded(s + 1));
    collisions += a.Complete(request).text == b.Complete(request).text;
  }
  EXPECT_LT(collisions, 10);
}

TEST(MockTest, ResponsesAreMostlyParseableAndPassing) {
  int parsed = 0, methods = 0, passing = 0;
  const auto program = minilang::ParseProgram(
      evotest::testing::ReadFixture("leap_year", "program.mini"));
  for (uint64_t s = 0; s < 100; ++s) {
    MockBackend mock(Seeded(s));
    const auto r = mock.Complete(GenRequest("leap_year", TemplateId::kGenA1));
    EXPECT_EQ(r.backend, "mock");
    EXPECT_EQ(r.prompt_tokens, 0);
    try {
      const auto suite = suite::SplitMethods(ExtractCode(r.text));
      ++parsed;
      for (const auto& [name, outcome] : suite::RunSuite(program, suite)) {
        ++methods;
        passing += outcome.status == minilang::RunStatus::kPass;
      }
    } catch (const minilang::ParseError&) {
    }
  }
  EXPECT_GE(parsed, 90);
  EXPECT_GT(methods, 100);
  EXPECT_GT(passing, methods / 2);
  EXPECT_LT(passing, methods);
}

TEST(MockTest, MutatorAddsAssertionsOnly) {
  const std::string source = evotest::testing::ReadFixture("gcd", "program.mini");
  const std::string method = "test t_gcd() {\n  assert_eq(gcd(12, 18), 6);\n}\n";
  const RenderedPrompt p = RenderPrompt(
      TemplateId::kMutator,
      {{"test_method", method}, {"source_code", source}, {"helpers", ""}});
  MockBackend mock(Seeded(1));
  CompletionRequest r{"mutator", p.system, p.user, kMutatorTemperature};
  const auto reply = suite::SplitMethods(ExtractCode(mock.Complete(r).text));
  ASSERT_EQ(reply.methods.size(), 1u);
  const int added = reply.methods[0].assertion_count - 1;
  EXPECT_GE(added, 1);
  EXPECT_LE(added, 5);
  IdentityBackend identity;
  EXPECT_EQ(suite::SplitMethods(identity.Complete(r).text).Print(),
            suite::SplitMethods(method).Print());
  EXPECT_EQ(identity.Complete(GenRequest("gcd", TemplateId::kGenA1)).text, "");
}

TEST(MockTest, UnparseableProgramGivesEmptyReply) {
  MockBackend mock(Seeded(1));
  CompletionRequest r{"gen_A1", "", "```mini\nfn broken( {\n```\n"};
  EXPECT_EQ(mock.Complete(r).text, "");
}

}  // namespace
}  // namespace evotest::llm
