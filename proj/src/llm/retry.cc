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

#include "rop/llm/retry.h"

#include <algorithm>
#include <cmath>

namespace rop::llm {

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry) {
  // retry is 1-based: the first retry waits initial_delay.
  const double factor = std::pow(policy.multiplier, std::max(0, retry - 1));
  const double ms = static_cast<double>(policy.initial_delay.count()) * factor;
  const double capped = std::min(ms, static_cast<double>(policy.max_delay.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

bool is_retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace rop::llm
