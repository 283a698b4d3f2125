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

#include "rop/perturb/validate.h"

#include <algorithm>

#include "rop/core/text.h"
#include "rop/core/utf8.h"
#include "rop/perturb/tokenize.h"

namespace rop::perturb {
namespace {

bool editable(const Token& t, const PerturbationConfig& cfg) {
  return t.kind == TokenKind::kWord ||
         (t.kind == TokenKind::kNumber && !cfg.protect_numbers);
}

std::optional<std::vector<Edit>> character_edits(std::string_view original,
                                                 std::string_view candidate,
                                                 PerturbationType type,
                                                 const PerturbationConfig& cfg,
                                                 const ConfusableTable& table) {
  if (!core::utf8::is_valid(candidate)) return std::nullopt;
  const std::u32string o = core::utf8::decode(original);
  const std::u32string c = core::utf8::decode(candidate);
  if (o.size() != c.size()) return std::nullopt;

  std::vector<bool> allowed(o.size(), false);
  const auto min_len = static_cast<std::size_t>(cfg.min_word_len);
  for (const auto& t : tokenize(std::u32string_view(o))) {
    if (!editable(t, cfg)) continue;
    const std::size_t len = t.end - t.start;
    if (type == PerturbationType::kSC) {
      if (len < min_len) continue;
      for (std::size_t p = t.start; p < t.end; ++p) allowed[p] = true;
    } else {
      if (len < std::max<std::size_t>(min_len, 3)) continue;
      for (std::size_t p = t.start + 1; p + 1 < t.end; ++p) allowed[p] = true;
    }
  }

  std::vector<Edit> edits;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (o[i] == c[i]) continue;
    if (!allowed[i]) return std::nullopt;
    if (type == PerturbationType::kSC && !table.contains(o[i], c[i])) {
      return std::nullopt;
    }
    if (type == PerturbationType::kEC && !is_letter(c[i]) && !is_digit(c[i])) {
      return std::nullopt;
    }
    edits.push_back({i, i + 1, core::utf8::encode(o[i]), core::utf8::encode(c[i]), type});
  }
  if (edits.size() != static_cast<std::size_t>(cfg.level)) return std::nullopt;
  return edits;
}

std::optional<std::vector<Edit>> word_order_edits(std::string_view original,
                                                  std::string_view candidate,
                                                  const PerturbationConfig& cfg) {
  const auto o = tokenize(original);
  const auto c = tokenize(candidate);
  if (o.size() != c.size()) return std::nullopt;
  auto unit = [](const Token& t) {
    return t.kind == TokenKind::kWord || t.kind == TokenKind::kNumber;
  };
  std::vector<Edit> edits;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (unit(o[i]) != unit(c[i])) return std::nullopt;
    if (!unit(o[i]) && o[i].text != c[i].text) return std::nullopt;
  }
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (o[i].text == c[i].text) continue;
    if (!unit(o[i]) || i + 2 >= o.size()) return std::nullopt;
    if (o[i + 1].kind != TokenKind::kWhitespace) return std::nullopt;
    if (c[i].text != o[i + 2].text || c[i + 2].text != o[i].text) return std::nullopt;
    edits.push_back({o[i].start, o[i + 2].end,
                     o[i].text + o[i + 1].text + o[i + 2].text,
                     c[i].text + c[i + 1].text + c[i + 2].text,
                     PerturbationType::kWOO});
    i += 2;
  }
  if (edits.size() != static_cast<std::size_t>(cfg.level)) return std::nullopt;
  return edits;
}

std::optional<std::vector<Edit>> homophone_edits(std::string_view original,
                                                 std::string_view candidate,
                                                 const PerturbationConfig& cfg,
                                                 const HomophoneDictionary& dict) {
  const auto o = tokenize(original);
  const auto c = tokenize(candidate);
  if (o.size() != c.size()) return std::nullopt;
  std::vector<Edit> edits;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (o[i].kind != c[i].kind) return std::nullopt;
    if (o[i].text == c[i].text) continue;
    if (o[i].kind != TokenKind::kWord) return std::nullopt;
    if (!dict.contains(core::to_lower_ascii(o[i].text),
                       core::to_lower_ascii(c[i].text))) {
      return std::nullopt;
    }
    edits.push_back({o[i].start, o[i].end, o[i].text, c[i].text,
                     PerturbationType::kHW});
  }
  if (edits.size() != static_cast<std::size_t>(cfg.level)) return std::nullopt;
  return edits;
}

}  // namespace

std::optional<std::vector<Edit>> derive_edits(std::string_view original,
                                              std::string_view candidate,
                                              PerturbationType type,
                                              const PerturbationConfig& cfg,
                                              const PerturbTables& tables) {
  if (!core::utf8::is_valid(candidate)) return std::nullopt;
  switch (type) {
    case PerturbationType::kEC:
    case PerturbationType::kSC:
      return character_edits(original, candidate, type, cfg, tables.confusables);
    case PerturbationType::kWOO:
      return word_order_edits(original, candidate, cfg);
    case PerturbationType::kHW:
      return homophone_edits(original, candidate, cfg, tables.homophones);
    case PerturbationType::kUIC:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace rop::perturb
