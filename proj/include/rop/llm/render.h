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

#ifndef ROP_LLM_RENDER_H_
#define ROP_LLM_RENDER_H_

#include <string>
#include <string_view>

#include "rop/ape/prompt.h"
#include "rop/llm/types.h"

namespace rop::llm {

struct SamplingParams {
  std::string model;
  double temperature = 0.0;
  int max_tokens = 512;
};

// Instruction -> system message (omitted when the instruction is empty),
// each demo -> user/assistant pair in order, query -> final user message.
ChatRequest render_prompt(const ape::Prompt& prompt, std::string_view query,
                          const SamplingParams& params);

}  // namespace rop::llm

#endif  // ROP_LLM_RENDER_H_
