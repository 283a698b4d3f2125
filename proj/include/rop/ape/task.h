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

#ifndef ROP_APE_TASK_H_
#define ROP_APE_TASK_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rop/ape/prompt.h"
#include "rop/core/types.h"
#include "rop/perturb/adversarial.h"

namespace rop::ape {

enum class TaskMode { kCorrection, kGuidance };

std::string_view to_string(TaskMode mode);
std::optional<TaskMode> parse_task_mode(std::string_view s);

// How correction-mode outputs are judged against the original question.
enum class CorrectionScorer {
  kExact,       // whitespace-normalized exact match
  kTokenF1,     // token F1 >= f1_threshold
  kDownstream,  // answer the corrected text with an empty prompt; compare gold
};

std::string_view to_string(CorrectionScorer scorer);
std::optional<CorrectionScorer> parse_correction_scorer(std::string_view s);

struct ScorerOptions {
  CorrectionScorer correction = CorrectionScorer::kExact;
  double f1_threshold = 0.9;
};

struct TaskItem {
  std::string id;
  std::string input;
  std::string output;
  // Gold answer of the underlying question, when known.
  std::optional<core::AnswerSpec> gold;
  std::vector<core::Choice> candidates;

  friend bool operator==(const TaskItem&, const TaskItem&) = default;
};

struct InstructionTask {
  TaskMode mode = TaskMode::kCorrection;
  std::vector<TaskItem> demos;
  std::vector<TaskItem> eval_set;
  // Set when eval_set is empty; scoring then runs over the demos.
  bool score_on_demos = false;
  ScorerOptions scorer;

  const std::vector<TaskItem>& scoring_set() const {
    return score_on_demos ? demos : eval_set;
  }
  std::vector<Demo> prompt_demos() const;

  // Throws ConfigError when demos and eval_set share an id or a split is
  // unusable.
  void validate() const;
};

// A corrected training question paired with its gold answer.
struct GuidanceExample {
  std::string id;
  std::string question;
  core::AnswerSpec answer;
  std::vector<core::Choice> candidates;
};

// Question text followed by an "Answer Choices:" line when there are
// candidates.
std::string format_query(std::string_view text,
                         std::span<const core::Choice> candidates);

// Canonical answer string used as guidance demo output.
std::string canonical_answer(const core::AnswerSpec& answer);

InstructionTask build_correction_task(const perturb::AdversarialDataset& adv,
                                      std::size_t m, double eval_fraction,
                                      std::uint64_t seed);

// At most `max_demos` of the non-eval examples become demos; 0 means all.
InstructionTask build_guidance_task(std::span<const GuidanceExample> corrected,
                                    double eval_fraction, std::uint64_t seed,
                                    std::size_t max_demos = 8);

}  // namespace rop::ape

#endif  // ROP_APE_TASK_H_
