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

#ifndef ROP_PIPELINE_PIPELINE_H_
#define ROP_PIPELINE_PIPELINE_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "rop/ape/prompt.h"
#include "rop/core/types.h"
#include "rop/llm/backend.h"
#include "rop/llm/types.h"
#include "rop/pipeline/artifacts.h"

namespace rop::pipeline {

enum class Method { kStand, kCoT, kGuidanceOnly, kCorrectionOnly, kRoP };

inline constexpr std::array<Method, 5> kAllMethods = {
    Method::kStand, Method::kCoT, Method::kGuidanceOnly,
    Method::kCorrectionOnly, Method::kRoP};

// stand, cot, go, co, rop
std::string_view cli_name(Method m);
// Stand, CoT, GO, CO, RoP
std::string_view label(Method m);
// Accepts either spelling, case-insensitively.
std::optional<Method> parse_method(std::string_view s);

bool needs_correction(Method m);

struct PipelineOptions {
  double temperature = 0.0;
  int max_tokens = 512;
  // When set, the corrected question is the text after the last occurrence
  // of this marker (whole completion if absent).
  std::optional<std::string> delimiter;
};

struct CorrectedQuestion {
  std::string original_id;
  std::string corrected_text;
  std::string correction_raw;
  // True when the completion was empty and the input was kept.
  bool fallback = false;
  llm::Usage usage;
};

struct AnswerOutcome {
  core::Prediction prediction;
  llm::ChatRequest request;
  llm::Completion completion;
};

struct MethodResult {
  core::Prediction prediction;
  std::optional<CorrectedQuestion> correction;
  // Final (answer-stage) request.
  llm::ChatRequest request;
  std::string finish_reason;
  // Summed over both stages.
  llm::Usage usage;
};

CorrectedQuestion correct(const std::string& question_id, std::string_view text,
                          const ape::Prompt& correction_prompt,
                          llm::ChatBackend& backend,
                          const PipelineOptions& opts = {});

// `question` supplies id, gold answer and candidates; `text` is what the
// model sees.
AnswerOutcome answer(std::string_view text, const ape::Prompt& prompt,
                     llm::ChatBackend& backend, const core::Question& question,
                     const PipelineOptions& opts = {});

// Throws ConfigError naming the method and the missing part.
void check_artifacts(Method method, const RopArtifacts& artifacts);

MethodResult run_method(const core::Question& question, std::string_view text,
                        Method method, const RopArtifacts& artifacts,
                        llm::ChatBackend& backend,
                        const PipelineOptions& opts = {});

}  // namespace rop::pipeline

#endif  // ROP_PIPELINE_PIPELINE_H_
