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

#ifndef ROP_LLM_FINGERPRINT_H_
#define ROP_LLM_FINGERPRINT_H_

#include <string>

#include "rop/llm/types.h"

namespace rop::llm {

// Compact JSON with sorted keys over model, messages, temperature and
// max_tokens. Equal requests serialize to identical bytes.
std::string canonical_serialization(const ChatRequest& req);

// Lowercase hex SHA-256 of the canonical serialization.
std::string fingerprint(const ChatRequest& req);

}  // namespace rop::llm

#endif  // ROP_LLM_FINGERPRINT_H_
