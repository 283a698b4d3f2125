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

#include "rop/llm/backend.h"

#include "rop/core/errors.h"

namespace rop::llm {

FunctionBackend::FunctionBackend(Handler handler, std::string model,
                                 std::size_t parallelism)
    : handler_(std::move(handler)),
      model_(std::move(model)),
      parallelism_(parallelism == 0 ? 1 : parallelism) {}

Completion FunctionBackend::complete(const ChatRequest& req) {
  ChatRequest resolved = resolve_model(req, *this);
  {
    std::lock_guard lock(mu_);
    requests_.push_back(resolved);
  }
  return handler_(resolved);
}

std::size_t FunctionBackend::calls() const {
  std::lock_guard lock(mu_);
  return requests_.size();
}

std::vector<ChatRequest> FunctionBackend::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

ChatRequest resolve_model(ChatRequest req, const ChatBackend& backend) {
  if (req.model.empty()) req.model = backend.model();
  if (req.messages.empty()) throw BackendError("chat request has no messages");
  return req;
}

ConcurrencyGate::ConcurrencyGate(std::size_t limit)
    : limit_(limit == 0 ? 1 : limit) {}

void ConcurrencyGate::acquire() {
  std::unique_lock lock(mu_);
  const std::uint64_t ticket = next_ticket_++;
  cv_.wait(lock, [&] { return ticket == serving_ && active_ < limit_; });
  ++active_;
  ++serving_;
  cv_.notify_all();
}

void ConcurrencyGate::release() {
  {
    std::lock_guard lock(mu_);
    --active_;
  }
  cv_.notify_all();
}

}  // namespace rop::llm
