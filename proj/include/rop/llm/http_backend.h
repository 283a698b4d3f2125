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

#ifndef ROP_LLM_HTTP_BACKEND_H_
#define ROP_LLM_HTTP_BACKEND_H_

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rop/core/errors.h"
#include "rop/llm/backend.h"
#include "rop/llm/config.h"
#include "rop/llm/retry.h"

namespace rop::llm {

struct HttpResponse {
  int status = 0;
  std::string body;
  // Header names lowercased.
  std::map<std::string, std::string> headers;
};

// Connection-level failure (DNS, refused, reset, timeout).
class TransportError : public BackendError {
 public:
  using BackendError::BackendError;
};

// Non-retryable HTTP status.
class HttpStatusError : public BackendError {
 public:
  HttpStatusError(int status, const std::string& body);
  int status() const { return status_; }

 private:
  int status_;
};

class RetryExhaustedError : public BackendError {
 public:
  explicit RetryExhaustedError(std::vector<std::string> attempts);
  const std::vector<std::string>& attempts() const { return attempts_; }

 private:
  std::vector<std::string> attempts_;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Throws TransportError when no HTTP response was obtained.
  virtual HttpResponse post(const std::string& url,
                            const std::map<std::string, std::string>& headers,
                            const std::string& body,
                            std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib transport; supports http:// and https:// URLs.
std::shared_ptr<HttpTransport> make_httplib_transport();

// OpenAI-compatible chat-completion client:
// POST {endpoint}/chat/completions with a bearer token from the environment.
// Transport errors, 429 and 5xx are retried with exponential backoff
// (honoring Retry-After when it asks for longer); other 4xx fail at once.
class HttpBackend : public ChatBackend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpBackend(BackendConfig config,
                       std::shared_ptr<HttpTransport> transport = nullptr,
                       Sleeper sleeper = nullptr);

  Completion complete(const ChatRequest& req) override;
  std::string model() const override { return config_.model; }
  std::size_t parallelism() const override { return config_.parallelism; }

  // Delays requested by the most recent complete() call, in order.
  std::vector<std::chrono::milliseconds> last_backoffs() const;

 private:
  std::string api_key() const;

  BackendConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  ConcurrencyGate gate_;
  mutable std::mutex mu_;
  std::vector<std::chrono::milliseconds> last_backoffs_;
};

// Request body for the chat-completion endpoint.
nlohmann::json chat_body(const ChatRequest& req);

// Parses a chat-completion response body. Throws BackendError when the body
// has no choices[0].message.content.
Completion parse_chat_response(const std::string& body);

}  // namespace rop::llm

#endif  // ROP_LLM_HTTP_BACKEND_H_
