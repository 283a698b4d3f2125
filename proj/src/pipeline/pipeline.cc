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

#include "rop/pipeline/pipeline.h"

#include "rop/ape/task.h"
#include "rop/core/answer.h"
#include "rop/core/errors.h"
#include "rop/core/text.h"
#include "rop/llm/render.h"

namespace rop::pipeline {

std::string_view cli_name(Method m) {
  switch (m) {
    case Method::kStand: return "stand";
    case Method::kCoT: return "cot";
    case Method::kGuidanceOnly: return "go";
    case Method::kCorrectionOnly: return "co";
    case Method::kRoP: return "rop";
  }
  return "stand";
}

std::string_view label(Method m) {
  switch (m) {
    case Method::kStand: return "Stand";
    case Method::kCoT: return "CoT";
    case Method::kGuidanceOnly: return "GO";
    case Method::kCorrectionOnly: return "CO";
    case Method::kRoP: return "RoP";
  }
  return "Stand";
}

std::optional<Method> parse_method(std::string_view s) {
  const std::string lower = core::to_lower_ascii(s);
  for (Method m : kAllMethods) {
    if (lower == cli_name(m) || lower == core::to_lower_ascii(label(m))) return m;
  }
  if (lower == "guidance-only") return Method::kGuidanceOnly;
  if (lower == "correction-only") return Method::kCorrectionOnly;
  return std::nullopt;
}

bool needs_correction(Method m) {
  return m == Method::kCorrectionOnly || m == Method::kRoP;
}

namespace {

void add_usage(llm::Usage& total, const llm::Usage& u) {
  total.prompt_tokens += u.prompt_tokens;
  total.completion_tokens += u.completion_tokens;
  total.total_tokens += u.total_tokens;
}

}  // namespace

CorrectedQuestion correct(const std::string& question_id, std::string_view text,
                          const ape::Prompt& correction_prompt,
                          llm::ChatBackend& backend, const PipelineOptions& opts) {
  const auto req = llm::render_prompt(correction_prompt, text,
                                      {"", opts.temperature, opts.max_tokens});
  const auto completion = backend.complete(req);
  CorrectedQuestion out;
  out.original_id = question_id;
  out.correction_raw = completion.text;
  out.usage = completion.usage;
  std::string_view body = completion.text;
  if (opts.delimiter && !opts.delimiter->empty()) {
    if (auto pos = body.rfind(*opts.delimiter); pos != std::string_view::npos) {
      body = body.substr(pos + opts.delimiter->size());
    }
  }
  out.corrected_text = core::trim(body);
  if (out.corrected_text.empty()) {
    out.corrected_text = std::string(text);
    out.fallback = true;
  }
  return out;
}

AnswerOutcome answer(std::string_view text, const ape::Prompt& prompt,
                     llm::ChatBackend& backend, const core::Question& question,
                     const PipelineOptions& opts) {
  AnswerOutcome out;
  out.request = llm::render_prompt(prompt, ape::format_query(text, question.candidates),
                                   {"", opts.temperature, opts.max_tokens});
  out.completion = backend.complete(out.request);
  out.prediction =
      core::make_prediction(question.id, out.completion.text, question.answer);
  return out;
}

void check_artifacts(Method method, const RopArtifacts& artifacts) {
  auto missing = [&](const char* part) {
    throw ConfigError("method " + std::string(label(method)) + " requires the " +
                      part + ", which is missing");
  };
  switch (method) {
    case Method::kStand:
      break;
    case Method::kCoT:
      if (!artifacts.cot) missing("chain-of-thought exemplars");
      break;
    case Method::kGuidanceOnly:
      if (!artifacts.guidance) missing("guidance prompt");
      break;
    case Method::kCorrectionOnly:
      if (!artifacts.correction) missing("correction prompt");
      break;
    case Method::kRoP:
      if (!artifacts.correction) missing("correction prompt");
      if (!artifacts.guidance) missing("guidance prompt");
      break;
  }
}

MethodResult run_method(const core::Question& question, std::string_view text,
                        Method method, const RopArtifacts& artifacts,
                        llm::ChatBackend& backend, const PipelineOptions& opts) {
  check_artifacts(method, artifacts);
  MethodResult result;
  std::string model_input(text);
  if (needs_correction(method)) {
    result.correction = correct(question.id, text, *artifacts.correction, backend, opts);
    add_usage(result.usage, result.correction->usage);
    model_input = result.correction->corrected_text;
  }
  static const ape::Prompt kEmpty;
  const ape::Prompt* prompt = &kEmpty;
  if (method == Method::kCoT) prompt = &*artifacts.cot;
  if (method == Method::kGuidanceOnly || method == Method::kRoP) {
    prompt = &*artifacts.guidance;
  }
  AnswerOutcome outcome = answer(model_input, *prompt, backend, question, opts);
  add_usage(result.usage, outcome.completion.usage);
  result.prediction = std::move(outcome.prediction);
  result.request = std::move(outcome.request);
  result.finish_reason = outcome.completion.finish_reason;
  return result;
}

}  // namespace rop::pipeline
