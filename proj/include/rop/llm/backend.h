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

#ifndef ROP_LLM_BACKEND_H_
#define ROP_LLM_BACKEND_H_

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "rop/llm/types.h"

namespace rop::llm {

// Anything that turns a chat request into a completion. Implementations must
// be safe to call from several threads at once.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  virtual Completion complete(const ChatRequest& req) = 0;

  // Model used when a request leaves `model` empty.
  virtual std::string model() const { return {}; }

  // Upper bound on useful concurrent calls.
  virtual std::size_t parallelism() const { return 1; }
};

// Backend driven by a callback. Used for offline tests and fixtures. Every
// request it sees is kept, in call order, for later inspection.
class FunctionBackend : public ChatBackend {
 public:
  using Handler = std::function<Completion(const ChatRequest&)>;

  explicit FunctionBackend(Handler handler, std::string model = "mock",
                           std::size_t parallelism = 1);

  Completion complete(const ChatRequest& req) override;
  std::string model() const override { return model_; }
  std::size_t parallelism() const override { return parallelism_; }

  std::size_t calls() const;
  std::vector<ChatRequest> requests() const;

 private:
  Handler handler_;
  std::string model_;
  std::size_t parallelism_;
  mutable std::mutex mu_;
  std::vector<ChatRequest> requests_;
};

// Copy of `req` with the backend's model filled in when empty.
ChatRequest resolve_model(ChatRequest req, const ChatBackend& backend);

// FIFO admission gate bounding the number of concurrent holders. Waiters are
// admitted strictly in arrival order.
class ConcurrencyGate {
 public:
  explicit ConcurrencyGate(std::size_t limit);

  void acquire();
  void release();

  class Lease {
   public:
    explicit Lease(ConcurrencyGate& gate) : gate_(gate) { gate_.acquire(); }
    ~Lease() { gate_.release(); }
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;

   private:
    ConcurrencyGate& gate_;
  };

  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
  std::size_t active_ = 0;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t serving_ = 0;
  std::mutex mu_;
  std::condition_variable cv_;
};

}  // namespace rop::llm

#endif  // ROP_LLM_BACKEND_H_
