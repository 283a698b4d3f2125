// Copyright 2026 The RoP Toolkit Authors
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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <gtest/gtest.h>

#include "rop/ape/prompt.h"
#include "rop/core/errors.h"
#include "rop/llm/backend.h"
#include "rop/llm/cassette.h"
#include "rop/llm/config.h"
#include "rop/llm/fingerprint.h"
#include "rop/llm/http_backend.h"
#include "rop/llm/render.h"
#include "rop/llm/retry.h"
#include "test_util.h"

namespace rop::llm {
namespace {

using std::chrono::milliseconds;

ChatRequest request(std::string text, double temperature = 0.0) {
  ChatRequest req;
  req.model = "m";
  req.messages.push_back({Role::kUser, std::move(text)});
  req.temperature = temperature;
  req.max_tokens = 64;
  return req;
}

std::string ok_body(const std::string& text) {
  nlohmann::json j = {{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}},
                                    {"finish_reason", "stop"}}}},
                      {"usage", {{"prompt_tokens", 3}, {"completion_tokens", 2},
                                 {"total_tokens", 5}}}};
  return j.dump();
}

TEST(Fingerprint, StableAndSensitive) {
  const auto base = fingerprint(request("hello"));
  EXPECT_EQ(base.size(), 64u);
  EXPECT_EQ(base, fingerprint(request("hello")));
  EXPECT_NE(base, fingerprint(request("hello ")));
  EXPECT_NE(base, fingerprint(request("hello", 0.5)));
  auto other_model = request("hello");
  other_model.model = "n";
  EXPECT_NE(base, fingerprint(other_model));
  auto other_role = request("hello");
  other_role.messages[0].role = Role::kSystem;
  EXPECT_NE(base, fingerprint(other_role));
}

TEST(Fingerprint, CanonicalFormSortsKeys) {
  const auto s = canonical_serialization(request("x"));
  EXPECT_LT(s.find("\"max_tokens\""), s.find("\"messages\""));
  EXPECT_LT(s.find("\"messages\""), s.find("\"model\""));
  EXPECT_LT(s.find("\"model\""), s.find("\"temperature\""));
}

TEST(Cassette, RecordThenReplayWithoutInner) {
  testing::TempDir dir;
  const auto path = dir.file("c.jsonl");
  auto inner = std::make_shared<FunctionBackend>(
      [](const ChatRequest& r) { return text_completion("echo: " + r.messages[0].content); });
  {
    auto cassette = Cassette::load(path);
    cassette->attach(path);
    CassetteBackend rec(cassette, CassetteMode::kRecord, inner);
    EXPECT_EQ(rec.complete(request("a")).text, "echo: a");
    EXPECT_EQ(rec.complete(request("a")).text, "echo: a");
    EXPECT_EQ(rec.complete(request("b")).text, "echo: b");
  }
  EXPECT_EQ(inner->calls(), 2u);

  CassetteBackend replay(Cassette::load(path), CassetteMode::kReplay, nullptr);
  EXPECT_EQ(replay.complete(request("a")).text, "echo: a");
  EXPECT_EQ(replay.complete(request("b")).text, "echo: b");
}

TEST(Cassette, ReplayMissNamesFingerprint) {
  CassetteBackend replay(std::make_shared<Cassette>(), CassetteMode::kReplay, nullptr);
  const auto req = request("unknown");
  try {
    replay.complete(req);
    FAIL();
  } catch (const ReplayMissError& e) {
    EXPECT_EQ(e.fingerprint(), fingerprint(req));
    EXPECT_NE(std::string(e.what()).find(fingerprint(req)), std::string::npos);
  }
}

TEST(Cassette, FirstRecordingWins) {
  Cassette c;
  EXPECT_TRUE(c.insert(request("a"), text_completion("1")));
  EXPECT_FALSE(c.insert(request("a"), text_completion("2")));
  EXPECT_EQ(c.lookup(fingerprint(request("a")))->text, "1");
  EXPECT_EQ(c.size(), 1u);
}

TEST(Cassette, SaveParseRoundTrip) {
  testing::TempDir dir;
  Cassette c;
  Completion comp = text_completion("x");
  comp.usage = {1, 2, 3};
  comp.finish_reason = "length";
  c.insert(request("q"), comp);
  c.save(dir.file("c.jsonl"));
  auto loaded = Cassette::load(dir.file("c.jsonl"));
  EXPECT_EQ(*loaded->lookup(fingerprint(request("q"))), comp);
  EXPECT_THROW(Cassette::parse("{not json\n"), Error);
}

TEST(Cassette, NonReplayNeedsInner) {
  EXPECT_THROW(CassetteBackend(std::make_shared<Cassette>(), CassetteMode::kRecord, nullptr),
               ConfigError);
}

TEST(Render, InstructionAndDemosBecomeTurns) {
  ape::Prompt bare;
  auto r0 = render_prompt(bare, "Q?", {"m", 0.0, 32});
  ASSERT_EQ(r0.messages.size(), 1u);
  EXPECT_EQ(r0.messages[0].content, "Q?");

  ape::Prompt p;
  p.instruction.text = "Fix typos.";
  p.demos = {{"a1", "b1"}, {"a2", "b2"}};
  auto r = render_prompt(p, "Q?", {"m", 0.0, 32});
  ASSERT_EQ(r.messages.size(), 6u);
  EXPECT_EQ(r.messages[0], (Message{Role::kSystem, "Fix typos."}));
  EXPECT_EQ(r.messages[1], (Message{Role::kUser, "a1"}));
  EXPECT_EQ(r.messages[2], (Message{Role::kAssistant, "b1"}));
  EXPECT_EQ(r.messages[5], (Message{Role::kUser, "Q?"}));
  EXPECT_EQ(fingerprint(r), fingerprint(render_prompt(p, "Q?", {"m", 0.0, 32})));

  ape::Prompt with_instruction_only;
  with_instruction_only.instruction.text = "Fix typos.";
  EXPECT_EQ(render_prompt(with_instruction_only, "Q?", {"m", 0.0, 32}).messages.size(), 2u);

  ape::Prompt broken;
  broken.demos = {{"", "b"}};
  EXPECT_THROW(render_prompt(broken, "Q?", {"m", 0.0, 32}), ConfigError);
}

TEST(Retry, BackoffGrowsAndCaps) {
  RetryPolicy p;
  p.initial_delay = milliseconds(100);
  p.max_delay = milliseconds(500);
  EXPECT_EQ(backoff_delay(p, 1), milliseconds(100));
  EXPECT_EQ(backoff_delay(p, 2), milliseconds(200));
  EXPECT_EQ(backoff_delay(p, 3), milliseconds(400));
  EXPECT_EQ(backoff_delay(p, 4), milliseconds(500));
  EXPECT_TRUE(is_retryable_status(429));
  EXPECT_TRUE(is_retryable_status(503));
  EXPECT_FALSE(is_retryable_status(400));
  EXPECT_FALSE(is_retryable_status(404));
}

class ScriptedTransport : public HttpTransport {
 public:
  explicit ScriptedTransport(std::vector<HttpResponse> script) : script_(std::move(script)) {}
  HttpResponse post(const std::string& url, const std::map<std::string, std::string>& headers,
                    const std::string& body, milliseconds) override {
    last_url = url;
    last_headers = headers;
    last_body = body;
    const auto i = calls++;
    if (i >= script_.size()) throw TransportError("script exhausted");
    if (script_[i].status == 0) throw TransportError("connection reset");
    return script_[i];
  }
  std::size_t calls = 0;
  std::string last_url;
  std::map<std::string, std::string> last_headers;
  std::string last_body;

 private:
  std::vector<HttpResponse> script_;
};

BackendConfig test_config() {
  ::setenv("ROP_TEST_KEY", "secret", 1);
  BackendConfig cfg;
  cfg.endpoint = "http://example.invalid/v1/";
  cfg.model = "m";
  cfg.api_key_env = "ROP_TEST_KEY";
  cfg.max_retries = 3;
  cfg.initial_backoff_ms = 10;
  cfg.max_backoff_ms = 1000;
  return cfg;
}

TEST(HttpBackend, RetriesRateLimitThenSucceeds) {
  auto transport = std::make_shared<ScriptedTransport>(
      std::vector<HttpResponse>{{429, "slow down", {}}, {200, ok_body("42"), {}}});
  std::vector<milliseconds> slept;
  HttpBackend backend(test_config(), transport, [&](milliseconds d) { slept.push_back(d); });
  const auto c = backend.complete(request("q"));
  EXPECT_EQ(c.text, "42");
  EXPECT_EQ(c.usage.total_tokens, 5);
  EXPECT_EQ(transport->calls, 2u);
  EXPECT_EQ(slept, std::vector<milliseconds>{milliseconds(10)});
  EXPECT_EQ(backend.last_backoffs(), slept);
  EXPECT_EQ(transport->last_url, "http://example.invalid/v1/chat/completions");
  EXPECT_EQ(transport->last_headers.at("Authorization"), "Bearer secret");
  const auto body = nlohmann::json::parse(transport->last_body);
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["stream"], false);
}

TEST(HttpBackend, ClientErrorIsNotRetried) {
  auto transport = std::make_shared<ScriptedTransport>(
      std::vector<HttpResponse>{{400, "bad", {}}, {200, ok_body("x"), {}}});
  HttpBackend backend(test_config(), transport, [](milliseconds) {});
  try {
    backend.complete(request("q"));
    FAIL();
  } catch (const HttpStatusError& e) {
    EXPECT_EQ(e.status(), 400);
  }
  EXPECT_EQ(transport->calls, 1u);
}

TEST(HttpBackend, ExhaustionCarriesAttemptLogAndMonotoneBackoff) {
  std::vector<HttpResponse> script = {{503, "", {}}, {0, "", {}}, {429, "", {{"retry-after", "0"}}},
                                      {500, "", {}}};
  auto transport = std::make_shared<ScriptedTransport>(script);
  std::vector<milliseconds> slept;
  HttpBackend backend(test_config(), transport, [&](milliseconds d) { slept.push_back(d); });
  try {
    backend.complete(request("q"));
    FAIL();
  } catch (const RetryExhaustedError& e) {
    ASSERT_EQ(e.attempts().size(), 4u);
    EXPECT_EQ(e.attempts()[0], "HTTP 503");
    EXPECT_NE(e.attempts()[1].find("connection reset"), std::string::npos);
  }
  ASSERT_EQ(slept.size(), 3u);
  for (std::size_t i = 1; i < slept.size(); ++i) EXPECT_GE(slept[i], slept[i - 1]);
}

TEST(HttpBackend, RetryAfterRaisesDelay) {
  auto transport = std::make_shared<ScriptedTransport>(std::vector<HttpResponse>{
      {429, "", {{"retry-after", "1"}}}, {200, ok_body("ok"), {}}});
  std::vector<milliseconds> slept;
  HttpBackend backend(test_config(), transport, [&](milliseconds d) { slept.push_back(d); });
  backend.complete(request("q"));
  EXPECT_EQ(slept, std::vector<milliseconds>{milliseconds(1000)});
}

TEST(HttpBackend, MissingKeyIsConfigError) {
  auto cfg = test_config();
  cfg.api_key_env = "ROP_TEST_KEY_THAT_IS_UNSET";
  ::unsetenv("ROP_TEST_KEY_THAT_IS_UNSET");
  HttpBackend backend(cfg, std::make_shared<ScriptedTransport>(std::vector<HttpResponse>{}),
                      [](milliseconds) {});
  EXPECT_THROW(backend.complete(request("q")), ConfigError);
}

TEST(HttpBackend, ParseResponse) {
  EXPECT_EQ(parse_chat_response(ok_body("hi")).text, "hi");
  EXPECT_THROW(parse_chat_response("nope"), BackendError);
  EXPECT_THROW(parse_chat_response(ok_body("")), BackendError);
  EXPECT_THROW(parse_chat_response("{\"choices\":[]}"), BackendError);
}

TEST(HttpBackend, RealServerRateLimitThenOk) {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    if (hits++ == 0) {
      res.status = 429;
      res.set_content("rate limited", "text/plain");
      return;
    }
    EXPECT_EQ(req.get_header_value("Authorization"), "Bearer secret");
    res.set_content(ok_body("from server"), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  auto cfg = test_config();
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  cfg.timeout_s = 5;
  HttpBackend backend(cfg, make_httplib_transport(), [](milliseconds) {});
  const auto c = backend.complete(request("q"));
  server.stop();
  thread.join();
  EXPECT_EQ(c.text, "from server");
  EXPECT_EQ(hits.load(), 2);
  EXPECT_EQ(backend.last_backoffs().size(), 1u);
}

TEST(HttpBackend, UnreachableHostIsTransportFailure) {
  auto cfg = test_config();
  cfg.endpoint = "http://127.0.0.1:1/v1";
  cfg.max_retries = 1;
  cfg.timeout_s = 1;
  HttpBackend backend(cfg, make_httplib_transport(), [](milliseconds) {});
  EXPECT_THROW(backend.complete(request("q")), RetryExhaustedError);
}

TEST(Config, JsonRoundTripAndValidation) {
  testing::TempDir dir;
  const auto path = dir.file("backend.json");
  std::ofstream(path) << R"({"model": "x", "parallelism": 2, "max_retries": 1,
      "cassette": {"path": "tape.jsonl", "mode": "record"}})";
  const auto cfg = load_backend_config(path);
  EXPECT_EQ(cfg.model, "x");
  EXPECT_EQ(cfg.parallelism, 2u);
  ASSERT_TRUE(cfg.cassette);
  EXPECT_EQ(cfg.cassette->mode, CassetteMode::kRecord);
  EXPECT_EQ(cfg.cassette->path, dir.file("tape.jsonl"));
  EXPECT_EQ(backend_config_from_json(to_json(cfg)).model, "x");

  EXPECT_THROW(backend_config_from_json({{"parallelism", 0}}), ConfigError);
  EXPECT_THROW(backend_config_from_json({{"cassette", {{"path", "x"}, {"mode", "tape"}}}}),
               ConfigError);
}

TEST(Config, ReplayBackendNeedsExistingCassette) {
  testing::TempDir dir;
  BackendConfig cfg;
  cfg.cassette = CassetteConfig{dir.file("missing.jsonl"), CassetteMode::kReplay};
  EXPECT_THROW(make_backend(cfg), ConfigError);

  Cassette c;
  c.insert(request("q"), text_completion("a"));
  c.save(dir.file("tape.jsonl"));
  cfg.cassette->path = dir.file("tape.jsonl");
  auto backend = make_backend(cfg);
  EXPECT_EQ(backend->complete(request("q")).text, "a");
  EXPECT_THROW(backend->complete(request("other")), ReplayMissError);
}

TEST(ConcurrencyGate, NeverExceedsLimit) {
  ConcurrencyGate gate(2);
  std::atomic<int> active{0};
  std::atomic<int> peak{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      ConcurrencyGate::Lease lease(gate);
      const int now = ++active;
      int prev = peak.load();
      while (now > prev && !peak.compare_exchange_weak(prev, now)) {}
      std::this_thread::sleep_for(milliseconds(5));
      --active;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

TEST(Backend, ResolveModelFillsDefault) {
  FunctionBackend backend([](const ChatRequest&) { return text_completion("x"); }, "dflt");
  ChatRequest req = request("q");
  req.model.clear();
  EXPECT_EQ(resolve_model(req, backend).model, "dflt");
  ChatRequest empty;
  EXPECT_THROW(resolve_model(empty, backend), BackendError);
}

}  // namespace
}  // namespace rop::llm
