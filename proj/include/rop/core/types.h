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

#ifndef ROP_CORE_TYPES_H_
#define ROP_CORE_TYPES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rop::core {

enum class AnswerKind { kNumeric, kChoice, kBoolean, kFreetext };

std::string_view to_string(AnswerKind kind);
std::optional<AnswerKind> parse_answer_kind(std::string_view s);

// Gold answer. `value` is kept exactly as ingested; comparison normalizes it.
struct AnswerSpec {
  AnswerKind kind = AnswerKind::kNumeric;
  std::string value;

  friend bool operator==(const AnswerSpec&, const AnswerSpec&) = default;
};

struct Choice {
  std::string label;
  std::string body;

  friend bool operator==(const Choice&, const Choice&) = default;
};

struct Question {
  std::string id;
  std::string text;
  AnswerSpec answer;
  std::vector<Choice> candidates;

  friend bool operator==(const Question&, const Question&) = default;
};

enum class Split { kTrain, kTest };

struct Dataset {
  std::string name;
  Split split = Split::kTest;
  std::vector<Question> questions;
};

// One model answer. `correct` is empty exactly when `extracted` is empty.
struct Prediction {
  std::string question_id;
  std::string raw_completion;
  std::optional<std::string> extracted;
  std::optional<bool> correct;
};

}  // namespace rop::core

#endif  // ROP_CORE_TYPES_H_
