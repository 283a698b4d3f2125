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

#include "rop/llm/render.h"

namespace rop::llm {

ChatRequest render_prompt(const ape::Prompt& prompt, std::string_view query,
                          const SamplingParams& params) {
  prompt.validate();
  ChatRequest req;
  req.model = params.model;
  req.temperature = params.temperature;
  req.max_tokens = params.max_tokens;
  if (!prompt.instruction.text.empty()) {
    req.messages.push_back({Role::kSystem, prompt.instruction.text});
  }
  for (const auto& demo : prompt.demos) {
    req.messages.push_back({Role::kUser, demo.input});
    req.messages.push_back({Role::kAssistant, demo.output});
  }
  req.messages.push_back({Role::kUser, std::string(query)});
  return req;
}

}  // namespace rop::llm
