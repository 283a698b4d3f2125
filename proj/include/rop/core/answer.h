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

#ifndef ROP_CORE_ANSWER_H_
#define ROP_CORE_ANSWER_H_

#include <optional>
#include <string>
#include <string_view>

#include "rop/core/types.h"

namespace rop::core {

// Relative tolerance for numeric answer equality.
inline constexpr double kNumericRelativeTolerance = 1e-6;

// Parses a plain decimal ("-12.5") or a fraction ("1/3"). Rejects anything
// else, including non-finite results.
std::optional<double> parse_decimal(std::string_view s);

// Canonical decimal rendering: integers without a fractional part, other
// values with at most nine decimals and no trailing zeros.
std::string format_decimal(double value);

// Extracts the canonical answer from free-form model output. Returns nullopt
// when nothing extractable is present. Idempotent for every kind.
//
//   numeric   text after the last "answer is"/"answer:" (if any), currency
//             symbols and thousands separators dropped, last number wins
//   choice    "(C)", "C.", "answer: C", "answer is C" or a lone letter
//   boolean   last of yes/no/true/false, mapped to "yes"/"no"
//   freetext  text after the last "answer is", collapsed whitespace, lower
//             case, trailing period dropped
std::optional<std::string> normalize_answer(std::string_view raw,
                                            AnswerKind kind);

// Normalizes `gold.value` with the same rules and compares. Numeric values
// match within kNumericRelativeTolerance; all other kinds by string equality.
bool compare_answers(const std::optional<std::string>& pred,
                     const AnswerSpec& gold);

// Builds a Prediction from a raw completion.
Prediction make_prediction(std::string question_id, std::string raw_completion,
                           const AnswerSpec& gold);

}  // namespace rop::core

#endif  // ROP_CORE_ANSWER_H_
