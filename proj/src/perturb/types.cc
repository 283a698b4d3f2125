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

#include "rop/perturb/types.h"

#include <algorithm>
#include <numeric>

#include "rop/core/errors.h"
#include "rop/core/text.h"
#include "rop/core/utf8.h"

namespace rop::perturb {

std::string_view to_string(PerturbationType type) {
  switch (type) {
    case PerturbationType::kEC:
      return "EC";
    case PerturbationType::kSC:
      return "SC";
    case PerturbationType::kWOO:
      return "WOO";
    case PerturbationType::kHW:
      return "HW";
    case PerturbationType::kUIC:
      return "UIC";
  }
  return "EC";
}

std::optional<PerturbationType> parse_perturbation_type(std::string_view s) {
  std::string lower = core::to_lower_ascii(s);
  for (auto t : kAllPerturbationTypes) {
    if (core::to_lower_ascii(to_string(t)) == lower) return t;
  }
  return std::nullopt;
}

std::string_view to_string(EcMode mode) {
  switch (mode) {
    case EcMode::kShuffle:
      return "shuffle";
    case EcMode::kSubstitute:
      return "substitute";
    case EcMode::kMixed:
      return "mixed";
  }
  return "mixed";
}

std::optional<EcMode> parse_ec_mode(std::string_view s) {
  if (s == "shuffle") return EcMode::kShuffle;
  if (s == "substitute") return EcMode::kSubstitute;
  if (s == "mixed") return EcMode::kMixed;
  return std::nullopt;
}

void PerturbationConfig::validate() const {
  if (level < 1) {
    throw ConfigError("perturbation level must be >= 1, got " +
                      std::to_string(level));
  }
  if (min_word_len < 2) {
    throw ConfigError("min_word_len must be >= 2, got " +
                      std::to_string(min_word_len));
  }
}

std::string apply_edits(std::string_view original, std::span<const Edit> edits) {
  const std::u32string text = core::utf8::decode(original);
  std::vector<std::size_t> order(edits.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(edits[a].start, edits[a].end) <
           std::pair(edits[b].start, edits[b].end);
  });

  std::u32string out;
  std::size_t cursor = 0;
  const Edit* prev = nullptr;
  for (std::size_t idx : order) {
    const Edit& e = edits[idx];
    if (e.start > e.end || e.end > text.size()) {
      throw PerturbationError("edit span [" + std::to_string(e.start) + ", " +
                  std::to_string(e.end) + ") outside text of length " +
                  std::to_string(text.size()));
    }
    if (prev && (prev->end > e.start || prev->start == e.start)) {
      throw PerturbationError("overlapping edits at offset " + std::to_string(e.start));
    }
    std::u32string_view span(text.data() + e.start, e.end - e.start);
    if (core::utf8::encode(span) != e.before) {
      throw PerturbationError("edit at offset " + std::to_string(e.start) +
                  " does not match the original text");
    }
    out.append(text, cursor, e.start - cursor);
    out += core::utf8::decode(e.after);
    cursor = e.end;
    prev = &e;
  }
  out.append(text, cursor, std::u32string::npos);
  return core::utf8::encode(out);
}

}  // namespace rop::perturb
