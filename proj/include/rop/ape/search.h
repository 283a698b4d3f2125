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

#ifndef ROP_APE_SEARCH_H_
#define ROP_APE_SEARCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rop/ape/prompt.h"
#include "rop/ape/task.h"
#include "rop/llm/backend.h"

namespace rop::ape {

struct ProposalOptions {
  // Meta-prompt with {{demos}} placeholder. Empty selects the shipped file
  // for the task mode.
  std::string meta_template;
  std::size_t demos_per_proposal = 5;
  double temperature = 0.9;
  int max_tokens = 256;
  std::uint64_t seed = 0;
};

struct ProposalResult {
  std::vector<Instruction> candidates;
  // Backend failures seen while proposing; candidates may then hold only
  // the seeded fallback.
  std::vector<std::string> errors;
};

ProposalResult propose_instructions(const InstructionTask& task,
                                    std::size_t n_candidates,
                                    llm::ChatBackend& backend,
                                    const ProposalOptions& opts = {});

// Strips quoting and "Instruction:" style prefixes; empty when nothing
// usable remains.
std::string clean_proposal(std::string_view raw);

std::string seeded_instruction(TaskMode mode);

std::string load_meta_template(TaskMode mode, const std::string& data_dir);

struct ScoreOptions {
  double temperature = 0.0;
  int max_tokens = 512;
  // 0 uses the backend's parallelism.
  std::size_t workers = 0;
};

// Judges one completion against an item under the task's scorer.
// `backend` is only consulted by the downstream correction scorer.
bool item_correct(const InstructionTask& task, const TaskItem& item,
                  const std::string& completion, llm::ChatBackend& backend,
                  const ScoreOptions& opts);

double score_instruction(const Instruction& instr, const InstructionTask& task,
                         llm::ChatBackend& backend,
                         const ScoreOptions& opts = {});

// Scores every candidate in place, fanning out over (candidate, item).
void score_candidates(std::vector<Instruction>& candidates,
                      const InstructionTask& task, llm::ChatBackend& backend,
                      const ScoreOptions& opts = {});

// Argmax by score; ties go to the lowest index. Throws ConfigError on an
// empty list or an unscored candidate.
std::size_t select_best_index(std::span<const Instruction> candidates);
Instruction select_best(std::span<const Instruction> candidates);

double token_f1(std::string_view prediction, std::string_view reference);

struct SearchOptions {
  std::size_t n_candidates = 8;
  ProposalOptions proposal;
  ScoreOptions score;
};

struct SearchResult {
  Instruction best;
  std::vector<Instruction> candidates;
  std::vector<std::string> errors;
};

SearchResult search_instruction(const InstructionTask& task,
                                llm::ChatBackend& backend,
                                const SearchOptions& opts = {});

}  // namespace rop::ape

#endif  // ROP_APE_SEARCH_H_
