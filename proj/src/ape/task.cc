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

#include "rop/ape/task.h"

#include <cmath>
#include <numeric>
#include <set>

#include "rop/core/answer.h"
#include "rop/core/errors.h"
#include "rop/core/random.h"
#include "rop/core/text.h"

namespace rop::ape {

void Prompt::validate() const {
  for (std::size_t i = 0; i < demos.size(); ++i) {
    if (core::trim(demos[i].input).empty() || core::trim(demos[i].output).empty()) {
      throw ConfigError("prompt demo " + std::to_string(i) +
                        " has an empty input or output");
    }
  }
}

std::string_view to_string(TaskMode mode) {
  return mode == TaskMode::kCorrection ? "correction" : "guidance";
}

std::optional<TaskMode> parse_task_mode(std::string_view s) {
  if (s == "correction") return TaskMode::kCorrection;
  if (s == "guidance") return TaskMode::kGuidance;
  return std::nullopt;
}

std::string_view to_string(CorrectionScorer scorer) {
  switch (scorer) {
    case CorrectionScorer::kExact: return "exact";
    case CorrectionScorer::kTokenF1: return "f1";
    case CorrectionScorer::kDownstream: return "downstream";
  }
  return "exact";
}

std::optional<CorrectionScorer> parse_correction_scorer(std::string_view s) {
  if (s == "exact") return CorrectionScorer::kExact;
  if (s == "f1") return CorrectionScorer::kTokenF1;
  if (s == "downstream") return CorrectionScorer::kDownstream;
  return std::nullopt;
}

std::vector<Demo> InstructionTask::prompt_demos() const {
  std::vector<Demo> out;
  out.reserve(demos.size());
  for (const auto& d : demos) out.push_back({d.input, d.output});
  return out;
}

void InstructionTask::validate() const {
  if (demos.empty()) throw ConfigError("instruction task has no demos");
  if (eval_set.empty() && !score_on_demos) {
    throw ConfigError("instruction task has an empty eval set");
  }
  std::set<std::string> seen;
  for (const auto& d : demos) {
    if (!seen.insert(d.id).second) {
      throw ConfigError("instruction task has duplicate id \"" + d.id + "\"");
    }
  }
  for (const auto& e : eval_set) {
    if (!seen.insert(e.id).second) {
      throw ConfigError("id \"" + e.id + "\" appears in both demos and eval set");
    }
  }
}

std::string format_query(std::string_view text,
                         std::span<const core::Choice> candidates) {
  std::string out(text);
  if (candidates.empty()) return out;
  out += "\nAnswer Choices:";
  for (const auto& c : candidates) {
    out += " (" + c.label + ") " + c.body;
  }
  return out;
}

std::string canonical_answer(const core::AnswerSpec& answer) {
  if (answer.kind == core::AnswerKind::kNumeric) {
    if (auto v = core::parse_decimal(answer.value)) return core::format_decimal(*v);
  }
  return answer.value;
}

namespace {

void check_fraction(double eval_fraction) {
  if (!(eval_fraction >= 0.0 && eval_fraction < 1.0)) {
    throw ConfigError("eval_fraction must be in [0, 1), got " +
                      std::to_string(eval_fraction));
  }
}

// Seeded permutation of [0, n).
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed,
                                     std::string_view tag) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  core::Rng rng(core::derive_seed(seed, {tag}));
  rng.shuffle(std::span(idx));
  return idx;
}

void split_items(InstructionTask& task, std::vector<TaskItem> items,
                 double eval_fraction, std::size_t max_demos) {
  const auto n_eval = static_cast<std::size_t>(
      std::floor(static_cast<double>(items.size()) * eval_fraction));
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i < n_eval) {
      task.eval_set.push_back(std::move(items[i]));
    } else if (max_demos == 0 || task.demos.size() < max_demos) {
      task.demos.push_back(std::move(items[i]));
    }
  }
  task.score_on_demos = task.eval_set.empty();
}

}  // namespace

InstructionTask build_correction_task(const perturb::AdversarialDataset& adv,
                                      std::size_t m, double eval_fraction,
                                      std::uint64_t seed) {
  check_fraction(eval_fraction);
  if (m == 0) throw ConfigError("m must be >= 1");
  if (m > adv.pairs.size()) {
    throw ConfigError("m=" + std::to_string(m) + " exceeds the " +
                      std::to_string(adv.pairs.size()) + " adversarial pairs");
  }
  std::vector<TaskItem> items;
  for (std::size_t i : permutation(adv.pairs.size(), seed, "correction-task")) {
    if (items.size() == m) break;
    const auto& pair = adv.pairs[i];
    items.push_back({pair.original.id, pair.perturbed.perturbed_text,
                     pair.original.text, pair.original.answer,
                     pair.original.candidates});
  }
  InstructionTask task;
  task.mode = TaskMode::kCorrection;
  split_items(task, std::move(items), eval_fraction, 0);
  task.validate();
  return task;
}

InstructionTask build_guidance_task(std::span<const GuidanceExample> corrected,
                                    double eval_fraction, std::uint64_t seed,
                                    std::size_t max_demos) {
  check_fraction(eval_fraction);
  if (corrected.empty()) throw ConfigError("guidance task needs at least one example");
  std::vector<TaskItem> items;
  for (std::size_t i : permutation(corrected.size(), seed, "guidance-task")) {
    const auto& ex = corrected[i];
    items.push_back({ex.id, format_query(ex.question, ex.candidates),
                     canonical_answer(ex.answer), ex.answer, ex.candidates});
  }
  InstructionTask task;
  task.mode = TaskMode::kGuidance;
  split_items(task, std::move(items), eval_fraction, max_demos);
  task.validate();
  return task;
}

}  // namespace rop::ape
