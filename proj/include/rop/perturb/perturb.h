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

#ifndef ROP_PERTURB_PERTURB_H_
#define ROP_PERTURB_PERTURB_H_

#include <cstdint>
#include <string_view>

#include "rop/core/types.h"
#include "rop/llm/backend.h"
#include "rop/perturb/tables.h"
#include "rop/perturb/types.h"

namespace rop::perturb {

// Changes exactly cfg.level character positions inside eligible words.
// Shuffle edits swap two distinct interior characters (first and last letters
// stay put); substitute edits replace one interior character with a different
// random lowercase letter; mixed draws either. Every changed position is its
// own Edit. Throws PerturbationError when no word is eligible or the level
// exceeds the editable interior characters.
PerturbationBody perturb_error_character(std::string_view text,
                                         const PerturbationConfig& cfg);

// Replaces exactly cfg.level characters of eligible words with a confusable
// from `table`, one Edit per character.
PerturbationBody perturb_similar_character(std::string_view text,
                                           const PerturbationConfig& cfg,
                                           const ConfusableTable& table);

// Performs cfg.level swaps of adjacent, distinct word/number tokens that are
// separated only by whitespace. Swap sites never share a token. One Edit per
// swap, spanning both tokens and the separator.
PerturbationBody perturb_word_order(std::string_view text,
                                    const PerturbationConfig& cfg);

// Replaces cfg.level distinct dictionary words with a homophone. An initial
// capital is carried over to the replacement.
PerturbationBody perturb_homophone(std::string_view text,
                                   const PerturbationConfig& cfg,
                                   const HomophoneDictionary& dict);

struct UicOptions {
  // Backend attempts whose output fails the prefix check before falling back.
  int max_attempts = 3;
  bool allow_fallback = true;
  double temperature = 0.9;
  int max_tokens = 512;
};

// Appends irrelevant but plausible information. With a backend, asks the
// model via `rewrite_template` and accepts the reply only if it starts with
// the original question (whitespace-normalized) and adds at least one more
// sentence; otherwise, or without a backend, appends a sentence from a
// built-in distractor bank filled with seeded numbers. The result is always
// the original text verbatim plus one appended span (a single Edit).
PerturbationBody perturb_uic(const core::Question& question,
                             llm::ChatBackend* backend,
                             std::string_view rewrite_template,
                             std::uint64_t seed, const UicOptions& opts = {});

// The offline distractor used by perturb_uic.
PerturbationBody uic_fallback(std::string_view text, std::uint64_t seed);

struct PerturbOptions {
  // Ask the backend for every type, validating against the type's rules and
  // falling back to the deterministic engine when validation fails.
  bool via_llm = false;
  UicOptions uic;
};

// Dispatches to the engine for `type`. `backend` may be null.
PerturbedQuestion perturb(const core::Question& question, PerturbationType type,
                          const PerturbationConfig& cfg,
                          const PerturbTables& tables,
                          llm::ChatBackend* backend = nullptr,
                          const PerturbOptions& opts = {});

// Human-readable strategy description inserted into the rewrite prompt.
std::string_view describe(PerturbationType type);

}  // namespace rop::perturb

#endif  // ROP_PERTURB_PERTURB_H_
