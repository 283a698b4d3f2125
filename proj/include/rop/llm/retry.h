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

#ifndef ROP_LLM_RETRY_H_
#define ROP_LLM_RETRY_H_

#include <chrono>

namespace rop::llm {

struct RetryPolicy {
  // Retries after the first attempt; total attempts = max_retries + 1.
  int max_retries = 5;
  std::chrono::milliseconds initial_delay{500};
  std::chrono::milliseconds max_delay{30000};
  double multiplier = 2.0;
};

// Delay before retry number `retry` (0-based): initial * multiplier^retry,
// capped at max_delay. Non-decreasing in `retry`.
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry);

// 429 and 5xx are transient; other statuses are the caller's fault.
bool is_retryable_status(int status);

}  // namespace rop::llm

#endif  // ROP_LLM_RETRY_H_
