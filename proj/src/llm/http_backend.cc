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

#include "rop/llm/http_backend.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <thread>

#include "rop/core/text.h"

namespace rop::llm {

HttpStatusError::HttpStatusError(int status, const std::string& body)
    : BackendError("HTTP " + std::to_string(status) + ": " +
                   body.substr(0, std::min<std::size_t>(body.size(), 300))),
      status_(status) {}

namespace {

std::string join_attempts(const std::vector<std::string>& attempts) {
  std::string msg = "request failed after " + std::to_string(attempts.size()) +
                    " attempt(s)";
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    msg += "; #" + std::to_string(i + 1) + ": " + attempts[i];
  }
  return msg;
}

std::optional<std::chrono::milliseconds> retry_after(const HttpResponse& resp) {
  auto it = resp.headers.find("retry-after");
  if (it == resp.headers.end()) return std::nullopt;
  const std::string v = core::trim(it->second);
  double seconds = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seconds);
  if (ec != std::errc() || ptr != v.data() + v.size() || seconds < 0) {
    return std::nullopt;  // HTTP-date form is ignored
  }
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
}

}  // namespace

RetryExhaustedError::RetryExhaustedError(std::vector<std::string> attempts)
    : BackendError(join_attempts(attempts)), attempts_(std::move(attempts)) {}

HttpBackend::HttpBackend(BackendConfig config,
                         std::shared_ptr<HttpTransport> transport,
                         Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      gate_(config_.parallelism) {
  config_.validate();
  if (!transport_) transport_ = make_httplib_transport();
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string HttpBackend::api_key() const {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("API key environment variable " + config_.api_key_env +
                      " is not set");
  }
  return key;
}

std::vector<std::chrono::milliseconds> HttpBackend::last_backoffs() const {
  std::lock_guard lock(mu_);
  return last_backoffs_;
}

Completion HttpBackend::complete(const ChatRequest& req) {
  const ChatRequest resolved = resolve_model(req, *this);
  std::string url = config_.endpoint;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/chat/completions";
  const std::map<std::string, std::string> headers = {
      {"Authorization", "Bearer " + api_key()},
      {"Content-Type", "application/json"}};
  const std::string body = chat_body(resolved).dump();
  const auto timeout = std::chrono::milliseconds(
      static_cast<long long>(config_.timeout_s * 1000));
  const RetryPolicy policy = config_.retry_policy();

  ConcurrencyGate::Lease lease(gate_);
  std::vector<std::string> attempts;
  std::vector<std::chrono::milliseconds> backoffs;
  auto finish = [&] {
    std::lock_guard lock(mu_);
    last_backoffs_ = backoffs;
  };
  std::chrono::milliseconds previous{0};
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
    std::optional<std::chrono::milliseconds> hinted;
    try {
      HttpResponse resp = transport_->post(url, headers, body, timeout);
      if (resp.status >= 200 && resp.status < 300) {
        finish();
        return parse_chat_response(resp.body);
      }
      if (!is_retryable_status(resp.status)) {
        finish();
        throw HttpStatusError(resp.status, resp.body);
      }
      attempts.push_back("HTTP " + std::to_string(resp.status));
      hinted = retry_after(resp);
    } catch (const TransportError& e) {
      attempts.push_back(std::string("transport: ") + e.what());
    }
    if (attempt == policy.max_retries) break;
    std::chrono::milliseconds delay = backoff_delay(policy, attempt + 1);
    if (hinted) delay = std::max(delay, std::min(*hinted, policy.max_delay));
    delay = std::max(delay, previous);
    previous = delay;
    backoffs.push_back(delay);
    sleeper_(delay);
  }
  finish();
  throw RetryExhaustedError(std::move(attempts));
}

nlohmann::json chat_body(const ChatRequest& req) {
  nlohmann::json body = to_json(req);
  body["stream"] = false;
  return body;
}

Completion parse_chat_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw BackendError(std::string("response is not JSON: ") + e.what());
  }
  try {
    const auto& choice = j.at("choices").at(0);
    Completion c;
    const auto& content = choice.at("message").at("content");
    c.text = content.is_null() ? std::string{} : content.get<std::string>();
    c.finish_reason = choice.value("finish_reason", std::string("stop"));
    if (c.finish_reason.empty()) c.finish_reason = "stop";
    if (auto it = j.find("usage"); it != j.end() && it->is_object()) {
      c.usage.prompt_tokens = it->value("prompt_tokens", 0);
      c.usage.completion_tokens = it->value("completion_tokens", 0);
      c.usage.total_tokens = it->value("total_tokens", 0);
    }
    if (c.text.empty() && c.finish_reason == "stop") {
      throw BackendError("empty completion with finish_reason \"stop\"");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("unexpected response shape: ") + e.what());
  }
}

}  // namespace rop::llm
