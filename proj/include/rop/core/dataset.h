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

#ifndef ROP_CORE_DATASET_H_
#define ROP_CORE_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rop/core/types.h"

namespace rop::core {

// Loads a JSONL dataset (one record per line, blank lines ignored):
//   {"id", "question", "answer", "answer_kind", "choices"?}
// The dataset name is the file stem. Errors carry the 1-based line number.
Dataset load_dataset(const std::string& path, Split split = Split::kTest);

// Parses already-read JSONL content; `name` becomes Dataset::name.
Dataset parse_dataset(const std::string& contents, const std::string& name,
                      Split split = Split::kTest);

void save_dataset(const Dataset& dataset, const std::string& path);

nlohmann::json question_to_json(const Question& q);

// Throws DatasetError naming the offending field.
Question question_from_json(const nlohmann::json& record,
                            std::size_t line = 0);

// Throws DatasetError when `q` breaks a Question invariant.
void validate_question(const Question& q, std::size_t line = 0);

// Returns `k` distinct questions in sampling order. Deterministic for a fixed
// (dataset, k, seed); k == size yields a permutation.
std::vector<Question> sample_questions(const Dataset& dataset, std::size_t k,
                                       std::uint64_t seed);

}  // namespace rop::core

#endif  // ROP_CORE_DATASET_H_
