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

#ifndef ROP_PERTURB_TYPES_H_
#define ROP_PERTURB_TYPES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rop/core/types.h"

namespace rop::perturb {

// EC error character, SC similar character, WOO words out of order,
// HW homophone words, UIC unaffected interference conditions.
enum class PerturbationType { kEC, kSC, kWOO, kHW, kUIC };

inline constexpr std::array<PerturbationType, 5> kAllPerturbationTypes = {
    PerturbationType::kEC, PerturbationType::kSC, PerturbationType::kWOO,
    PerturbationType::kHW, PerturbationType::kUIC};

std::string_view to_string(PerturbationType type);
// Accepts "EC" or "ec" etc.
std::optional<PerturbationType> parse_perturbation_type(std::string_view s);

enum class EcMode { kShuffle, kSubstitute, kMixed };

std::string_view to_string(EcMode mode);
std::optional<EcMode> parse_ec_mode(std::string_view s);

struct PerturbationConfig {
  // Atomic edits: characters for EC/SC, adjacent swaps for WOO, word
  // substitutions for HW. Ignored by UIC.
  int level = 1;
  std::uint64_t seed = 0;
  bool protect_numbers = true;
  // Minimum word length (code points) for EC/SC eligibility.
  int min_word_len = 3;
  EcMode ec_mode = EcMode::kMixed;

  // Throws ConfigError.
  void validate() const;
};

// A replacement of the code-point range [start, end) of the original text.
struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string before;
  std::string after;
  PerturbationType kind = PerturbationType::kEC;

  friend bool operator==(const Edit&, const Edit&) = default;
};

// Text plus the edits that produce it from the input.
struct PerturbationBody {
  std::string text;
  std::vector<Edit> edits;
};

struct PerturbedQuestion {
  std::string original_id;
  std::string perturbed_text;
  PerturbationType type = PerturbationType::kEC;
  std::vector<Edit> edits;
  core::AnswerSpec answer;
  std::vector<core::Choice> candidates;

  friend bool operator==(const PerturbedQuestion&,
                         const PerturbedQuestion&) = default;
};

// Replays `edits` over `original`. Throws rop::Error when two edits overlap
// or an edit's `before` differs from the original text at its span.
std::string apply_edits(std::string_view original, std::span<const Edit> edits);

}  // namespace rop::perturb

#endif  // ROP_PERTURB_TYPES_H_
