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

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>

#include "rop/core/errors.h"
#include "rop/core/random.h"
#include "rop/core/text.h"
#include "rop/core/utf8.h"
#include "rop/llm/backend.h"
#include "rop/perturb/perturb.h"
#include "rop/perturb/tokenize.h"
#include "rop/perturb/validate.h"

namespace rop::perturb {
namespace {

constexpr int kMaxAttempts = 64;

struct WordSpan {
  std::size_t start;
  std::size_t end;
  std::size_t size() const { return end - start; }
};

// Word tokens, plus number tokens when numbers are not protected.
std::vector<WordSpan> editable_spans(const std::vector<Token>& tokens,
                                     const PerturbationConfig& cfg,
                                     std::size_t min_len) {
  std::vector<WordSpan> out;
  for (const auto& t : tokens) {
    bool editable = t.kind == TokenKind::kWord ||
                    (t.kind == TokenKind::kNumber && !cfg.protect_numbers);
    if (editable && t.end - t.start >= min_len) out.push_back({t.start, t.end});
  }
  return out;
}

std::vector<Edit> char_edits(const std::u32string& before,
                             const std::u32string& after,
                             PerturbationType kind) {
  std::vector<Edit> edits;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i] != after[i]) {
      edits.push_back({i, i + 1, core::utf8::encode(before[i]),
                       core::utf8::encode(after[i]), kind});
    }
  }
  return edits;
}

// One attempt at placing exactly `level` changed positions. Returns the new
// text or nullopt when the random choices reached a dead end.
std::optional<std::u32string> try_error_character(
    const std::u32string& text, const std::vector<WordSpan>& shuffle_words,
    const std::vector<WordSpan>& substitute_words, const PerturbationConfig& cfg,
    core::Rng& rng) {
  std::u32string out = text;
  std::vector<bool> touched(text.size(), false);
  int remaining = cfg.level;

  auto interior = [](const WordSpan& w) {
    return std::pair(w.start + 1, w.end - 1);  // [first, last)
  };

  auto try_cycle = [&](std::size_t arity) -> bool {
    // Candidate position tuples inside one word with pairwise distinct chars.
    std::vector<std::array<std::size_t, 3>> cands;
    for (const auto& w : shuffle_words) {
      auto [lo, hi] = interior(w);
      for (std::size_t a = lo; a < hi; ++a) {
        if (touched[a]) continue;
        for (std::size_t b = a + 1; b < hi; ++b) {
          if (touched[b] || text[a] == text[b]) continue;
          if (arity == 2) {
            cands.push_back({a, b, 0});
            continue;
          }
          for (std::size_t c = b + 1; c < hi; ++c) {
            if (touched[c] || text[c] == text[a] || text[c] == text[b]) continue;
            cands.push_back({a, b, c});
          }
        }
      }
    }
    if (cands.empty()) return false;
    const auto& pick = cands[rng.uniform(cands.size())];
    if (arity == 2) {
      std::swap(out[pick[0]], out[pick[1]]);
    } else if (rng.coin()) {
      out[pick[0]] = text[pick[2]], out[pick[1]] = text[pick[0]],
      out[pick[2]] = text[pick[1]];
    } else {
      out[pick[0]] = text[pick[1]], out[pick[1]] = text[pick[2]],
      out[pick[2]] = text[pick[0]];
    }
    for (std::size_t i = 0; i < arity; ++i) touched[pick[i]] = true;
    remaining -= static_cast<int>(arity);
    return true;
  };

  auto try_substitute = [&]() -> bool {
    std::vector<std::size_t> cands;
    for (const auto& w : substitute_words) {
      auto [lo, hi] = interior(w);
      for (std::size_t p = lo; p < hi; ++p) {
        if (!touched[p]) cands.push_back(p);
      }
    }
    if (cands.empty()) return false;
    std::size_t p = cands[rng.uniform(cands.size())];
    std::vector<char32_t> letters;
    for (char32_t c = U'a'; c <= U'z'; ++c) {
      if (c != text[p]) letters.push_back(c);
    }
    out[p] = letters[rng.uniform(letters.size())];
    touched[p] = true;
    remaining -= 1;
    return true;
  };

  while (remaining > 0) {
    bool ok = false;
    switch (cfg.ec_mode) {
      case EcMode::kShuffle:
        ok = (remaining % 2 == 1) ? try_cycle(3) : try_cycle(2);
        break;
      case EcMode::kSubstitute:
        ok = try_substitute();
        break;
      case EcMode::kMixed:
        if (remaining >= 2 && rng.coin()) ok = try_cycle(2);
        if (!ok) ok = try_substitute();
        if (!ok && remaining >= 2) ok = try_cycle(2);
        break;
    }
    if (!ok) return std::nullopt;
  }
  return out;
}

// Upper-cases the first letter of `word` when it is ASCII.
std::string capitalize_first(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') {
    word[0] = static_cast<char>(word[0] - 'a' + 'A');
  }
  return word;
}

}  // namespace

PerturbationBody perturb_error_character(std::string_view text,
                                         const PerturbationConfig& cfg) {
  cfg.validate();
  const std::u32string cps = core::utf8::decode(text);
  const auto tokens = tokenize(std::u32string_view(cps));
  const auto min_len = static_cast<std::size_t>(cfg.min_word_len);
  const auto shuffle_words = editable_spans(tokens, cfg, std::max<std::size_t>(min_len, 4));
  const auto substitute_words = editable_spans(tokens, cfg, std::max<std::size_t>(min_len, 3));

  const auto& budget_words =
      cfg.ec_mode == EcMode::kShuffle ? shuffle_words : substitute_words;
  if (budget_words.empty()) {
    throw PerturbationError("EC: no eligible word");
  }
  std::size_t budget = 0;
  for (const auto& w : budget_words) budget += w.size() - 2;
  if (static_cast<std::size_t>(cfg.level) > budget) {
    throw PerturbationError("EC: level " + std::to_string(cfg.level) +
                            " exceeds the " + std::to_string(budget) +
                            " editable interior characters");
  }
  if (cfg.ec_mode == EcMode::kShuffle && cfg.level == 1) {
    throw PerturbationError("EC: shuffle mode changes at least 2 characters");
  }

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    core::Rng rng(core::derive_seed(cfg.seed, {"EC", std::to_string(attempt)}));
    if (auto out = try_error_character(cps, shuffle_words, substitute_words, cfg, rng)) {
      return {core::utf8::encode(*out), char_edits(cps, *out, PerturbationType::kEC)};
    }
  }
  throw PerturbationError("EC: could not place " + std::to_string(cfg.level) +
                          " character edits in this text");
}

PerturbationBody perturb_similar_character(std::string_view text,
                                           const PerturbationConfig& cfg,
                                           const ConfusableTable& table) {
  cfg.validate();
  const std::u32string cps = core::utf8::decode(text);
  const auto tokens = tokenize(std::u32string_view(cps));
  std::vector<std::size_t> positions;
  for (const auto& w :
       editable_spans(tokens, cfg, static_cast<std::size_t>(cfg.min_word_len))) {
    for (std::size_t p = w.start; p < w.end; ++p) {
      if (!table.variants(cps[p]).empty()) positions.push_back(p);
    }
  }
  if (positions.empty()) throw PerturbationError("SC: no mappable character");
  if (static_cast<std::size_t>(cfg.level) > positions.size()) {
    throw PerturbationError("SC: level " + std::to_string(cfg.level) +
                            " exceeds the " + std::to_string(positions.size()) +
                            " mappable characters");
  }
  core::Rng rng(core::derive_seed(cfg.seed, {"SC"}));
  std::u32string out = cps;
  for (int i = 0; i < cfg.level; ++i) {
    std::size_t j = static_cast<std::size_t>(i) + rng.uniform(positions.size() - i);
    std::swap(positions[i], positions[j]);
    const std::size_t p = positions[i];
    const auto& variants = table.variants(cps[p]);
    out[p] = variants[rng.uniform(variants.size())];
  }
  return {core::utf8::encode(out), char_edits(cps, out, PerturbationType::kSC)};
}

PerturbationBody perturb_word_order(std::string_view text,
                                    const PerturbationConfig& cfg) {
  cfg.validate();
  const std::u32string cps = core::utf8::decode(text);
  const auto tokens = tokenize(std::u32string_view(cps));
  auto is_unit = [&](std::size_t i) {
    return tokens[i].kind == TokenKind::kWord || tokens[i].kind == TokenKind::kNumber;
  };
  std::size_t units = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) units += is_unit(i);
  if (units < 2) throw PerturbationError("WOO: fewer than 2 word/number tokens");

  // Swap sites: (token index a, token index a + 2) with whitespace between.
  std::vector<std::size_t> sites;
  for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
    if (is_unit(i) && is_unit(i + 2) &&
        tokens[i + 1].kind == TokenKind::kWhitespace &&
        tokens[i].text != tokens[i + 2].text) {
      sites.push_back(i);
    }
  }
  // Sites chained through shared tokens form runs; a run of s sites admits
  // ceil(s / 2) disjoint swaps.
  std::size_t capacity = 0;
  std::vector<std::size_t> leftmost;
  for (std::size_t r = 0; r < sites.size();) {
    std::size_t e = r;
    while (e + 1 < sites.size() && sites[e + 1] == sites[e] + 2) ++e;
    for (std::size_t s = r; s <= e; s += 2) leftmost.push_back(sites[s]);
    capacity += (e - r + 2) / 2;
    r = e + 1;
  }
  if (static_cast<std::size_t>(cfg.level) > capacity) {
    throw PerturbationError("WOO: level " + std::to_string(cfg.level) +
                            " exceeds the " + std::to_string(capacity) +
                            " disjoint adjacent swaps available");
  }

  std::vector<std::size_t> chosen;
  for (int attempt = 0; attempt < kMaxAttempts && chosen.empty(); ++attempt) {
    core::Rng rng(core::derive_seed(cfg.seed, {"WOO", std::to_string(attempt)}));
    std::vector<std::size_t> order = sites;
    rng.shuffle(std::span(order));
    std::vector<std::size_t> picked;
    for (std::size_t s : order) {
      if (picked.size() == static_cast<std::size_t>(cfg.level)) break;
      bool clash = std::any_of(picked.begin(), picked.end(), [&](std::size_t p) {
        return p == s || p + 2 == s || s + 2 == p;
      });
      if (!clash) picked.push_back(s);
    }
    if (picked.size() == static_cast<std::size_t>(cfg.level)) chosen = picked;
  }
  if (chosen.empty()) {
    // The leftmost packing of every run always reaches capacity.
    core::Rng rng(core::derive_seed(cfg.seed, {"WOO", "packed"}));
    rng.shuffle(std::span(leftmost));
    chosen.assign(leftmost.begin(), leftmost.begin() + cfg.level);
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<Edit> edits;
  for (std::size_t s : chosen) {
    const Token& a = tokens[s];
    const Token& sep = tokens[s + 1];
    const Token& b = tokens[s + 2];
    edits.push_back({a.start, b.end, a.text + sep.text + b.text,
                     b.text + sep.text + a.text, PerturbationType::kWOO});
  }
  return {apply_edits(text, edits), std::move(edits)};
}

PerturbationBody perturb_homophone(std::string_view text,
                                   const PerturbationConfig& cfg,
                                   const HomophoneDictionary& dict) {
  cfg.validate();
  const auto tokens = tokenize(text);
  std::vector<const Token*> hits;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::kWord &&
        !dict.alternatives(core::to_lower_ascii(t.text)).empty()) {
      hits.push_back(&t);
    }
  }
  if (hits.empty()) throw PerturbationError("HW: no dictionary word in text");
  if (static_cast<std::size_t>(cfg.level) > hits.size()) {
    throw PerturbationError("HW: level " + std::to_string(cfg.level) +
                            " exceeds the " + std::to_string(hits.size()) +
                            " dictionary words");
  }
  core::Rng rng(core::derive_seed(cfg.seed, {"HW"}));
  std::vector<Edit> edits;
  for (int i = 0; i < cfg.level; ++i) {
    std::size_t j = static_cast<std::size_t>(i) + rng.uniform(hits.size() - i);
    std::swap(hits[i], hits[j]);
    const Token& t = *hits[i];
    const auto& alts = dict.alternatives(core::to_lower_ascii(t.text));
    std::string alt = alts[rng.uniform(alts.size())];
    if (t.text[0] >= 'A' && t.text[0] <= 'Z') alt = capitalize_first(alt);
    edits.push_back({t.start, t.end, t.text, alt, PerturbationType::kHW});
  }
  std::sort(edits.begin(), edits.end(),
            [](const Edit& a, const Edit& b) { return a.start < b.start; });
  return {apply_edits(text, edits), std::move(edits)};
}

std::string_view describe(PerturbationType type) {
  switch (type) {
    case PerturbationType::kEC:
      return "error character: shuffle the inner letters of some words or "
             "change a few letters to other letters";
    case PerturbationType::kSC:
      return "similar character: replace some letters with visually similar "
             "symbols or accented characters";
    case PerturbationType::kWOO:
      return "words out of order: swap the positions of some neighboring words";
    case PerturbationType::kHW:
      return "homophone words: replace some words with words that sound the "
             "same but are spelled differently";
    case PerturbationType::kUIC:
      return "unaffected interference conditions: keep the question exactly as "
             "it is and append irrelevant but plausible information that does "
             "not change the answer";
  }
  return "";
}

PerturbedQuestion perturb(const core::Question& question, PerturbationType type,
                          const PerturbationConfig& cfg,
                          const PerturbTables& tables, llm::ChatBackend* backend,
                          const PerturbOptions& opts) {
  cfg.validate();
  auto deterministic = [&]() -> PerturbationBody {
    switch (type) {
      case PerturbationType::kEC:
        return perturb_error_character(question.text, cfg);
      case PerturbationType::kSC:
        return perturb_similar_character(question.text, cfg, tables.confusables);
      case PerturbationType::kWOO:
        return perturb_word_order(question.text, cfg);
      case PerturbationType::kHW:
        return perturb_homophone(question.text, cfg, tables.homophones);
      case PerturbationType::kUIC:
        return perturb_uic(question, backend, tables.rewrite_template, cfg.seed,
                           opts.uic);
    }
    throw ConfigError("unknown perturbation type");
  };

  std::optional<PerturbationBody> body;
  if (type != PerturbationType::kUIC && opts.via_llm && backend) {
    llm::ChatRequest req;
    req.messages.push_back(
        {llm::Role::kUser,
         core::render_template(tables.rewrite_template,
                               {{"type", std::string(to_string(type))},
                                {"type_description", std::string(describe(type))},
                                {"question", question.text},
                                {"answer", question.answer.value}})});
    req.temperature = opts.uic.temperature;
    req.max_tokens = opts.uic.max_tokens;
    try {
      auto completion = backend->complete(llm::resolve_model(req, *backend));
      std::string candidate = core::trim(completion.text);
      if (auto edits = derive_edits(question.text, candidate, type, cfg, tables)) {
        body = PerturbationBody{candidate, std::move(*edits)};
      }
    } catch (const BackendError&) {
      // Falls through to the deterministic engine.
    }
  }
  if (!body) body = deterministic();

  PerturbedQuestion out;
  out.original_id = question.id;
  out.perturbed_text = std::move(body->text);
  out.type = type;
  out.edits = std::move(body->edits);
  out.answer = question.answer;
  out.candidates = question.candidates;
  return out;
}

}  // namespace rop::perturb
