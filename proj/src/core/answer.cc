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

#include "rop/core/answer.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <regex>

#include "rop/core/text.h"

namespace rop::core {
namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::optional<double> parse_plain(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') ++i;
  std::size_t int_digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++int_digits;
  std::size_t frac_digits = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++frac_digits;
    if (frac_digits == 0) return std::nullopt;
  }
  if (i != s.size() || int_digits + frac_digits == 0) return std::nullopt;
  // from_chars rejects a leading '+'.
  std::string_view body = s[0] == '+' ? s.substr(1) : s;
  double value = 0.0;
  auto res = std::from_chars(body.data(), body.data() + body.size(), value);
  if (res.ec != std::errc() || !std::isfinite(value)) return std::nullopt;
  return value;
}

// Index just past the last "answer is" / "answer:" (case-insensitive), with
// following spaces and colons skipped. npos when absent.
std::size_t after_answer_marker(std::string_view raw) {
  std::string lowered = to_lower_ascii(raw);
  std::size_t best = std::string::npos;
  for (std::size_t pos = lowered.find("answer"); pos != std::string::npos;
       pos = lowered.find("answer", pos + 1)) {
    std::size_t p = pos + 6;
    while (p < lowered.size() && lowered[p] == ' ') ++p;
    if (lowered.compare(p, 2, "is") == 0 &&
        (p + 2 == lowered.size() || !is_alpha(lowered[p + 2]))) {
      p += 2;
    } else if (p < lowered.size() && lowered[p] == ':') {
      ++p;
    } else {
      continue;
    }
    while (p < lowered.size() && (lowered[p] == ' ' || lowered[p] == ':')) ++p;
    best = p;
  }
  return best;
}

std::optional<std::string> last_number(const std::string& text) {
  // Thousands separators: a comma between a digit and exactly three digits.
  static const std::regex kThousands(R"((\d),(?=\d{3}(?!\d)))");
  static const std::regex kNumber(
      R"(-?(?:\d+(?:\.\d+)?|\.\d+)(?:/\d+(?:\.\d+)?)?)");
  std::string cleaned = std::regex_replace(text, kThousands, "$1");
  std::optional<std::string> found;
  for (auto it = std::sregex_iterator(cleaned.begin(), cleaned.end(), kNumber);
       it != std::sregex_iterator(); ++it) {
    std::string token = it->str();
    auto at = static_cast<std::size_t>(it->position());
    // "5-10": the hyphen is a range marker, not a sign.
    if (token[0] == '-' && at > 0 &&
        (is_alpha(cleaned[at - 1]) || is_digit(cleaned[at - 1]))) {
      token.erase(0, 1);
    }
    found = token;
  }
  return found;
}

std::optional<std::string> normalize_numeric(std::string_view raw) {
  std::string text(raw);
  std::optional<std::string> token;
  if (std::size_t p = after_answer_marker(text); p != std::string::npos) {
    token = last_number(text.substr(p));
  }
  if (!token) token = last_number(text);
  if (!token) return std::nullopt;
  auto value = parse_decimal(*token);
  if (!value) return std::nullopt;
  return format_decimal(*value);
}

std::optional<std::string> normalize_choice(std::string_view raw) {
  auto upper = [](char c) {
    return std::string(1, static_cast<char>(
                              std::toupper(static_cast<unsigned char>(c))));
  };
  const std::string text(raw);
  const std::string lowered = to_lower_ascii(text);

  // "answer is C", "answer: (c)"
  std::optional<std::string> marked;
  for (std::size_t pos = lowered.find("answer"); pos != std::string::npos;
       pos = lowered.find("answer", pos + 1)) {
    std::size_t p = pos + 6;
    while (p < text.size() && text[p] == ' ') ++p;
    // After "is" a bare lowercase letter is too likely an article ("is a").
    bool colon = false;
    if (lowered.compare(p, 2, "is") == 0) {
      p += 2;
    } else if (p >= text.size() || text[p] != ':') {
      continue;
    } else {
      colon = true;
    }
    while (p < text.size() && (text[p] == ' ' || text[p] == ':')) ++p;
    if (p + 2 < text.size() && text[p] == '(' && is_alpha(text[p + 1]) &&
        text[p + 2] == ')') {
      marked = upper(text[p + 1]);
    } else if (p < text.size() && is_alpha(text[p]) &&
               (colon || std::isupper(static_cast<unsigned char>(text[p]))) &&
               (p + 1 == text.size() || !is_alpha(text[p + 1]))) {
      marked = upper(text[p]);
    }
  }
  if (marked) return marked;

  // "(C)"
  std::optional<std::string> paren;
  for (std::size_t p = 0; p + 2 < text.size(); ++p) {
    if (text[p] == '(' && is_alpha(text[p + 1]) && text[p + 2] == ')') {
      paren = upper(text[p + 1]);
    }
  }
  if (paren) return paren;

  // "C", "c.", "C)"
  std::string t = trim(text);
  if (!t.empty() && is_alpha(t[0]) &&
      (t.size() == 1 || (t.size() == 2 && (t[1] == '.' || t[1] == ')')))) {
    return upper(t[0]);
  }

  // "C. 42"
  for (std::size_t p = 0; p + 1 < text.size(); ++p) {
    if (std::isupper(static_cast<unsigned char>(text[p])) &&
        (text[p + 1] == '.' || text[p + 1] == ')') &&
        (p == 0 || !is_alpha(text[p - 1]))) {
      return upper(text[p]);
    }
  }
  return std::nullopt;
}

std::optional<std::string> normalize_boolean(std::string_view raw) {
  std::string lowered = to_lower_ascii(raw);
  std::optional<std::string> found;
  std::size_t i = 0;
  while (i < lowered.size()) {
    if (!is_alpha(lowered[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < lowered.size() && is_alpha(lowered[j])) ++j;
    std::string_view word(lowered.data() + i, j - i);
    if (word == "yes" || word == "true") found = "yes";
    if (word == "no" || word == "false") found = "no";
    i = j;
  }
  return found;
}

std::optional<std::string> normalize_freetext(std::string_view raw) {
  std::string_view body = raw;
  if (std::size_t p = after_answer_marker(raw); p != std::string::npos) {
    body = raw.substr(p);
  }
  std::string out = to_lower_ascii(collapse_whitespace(body));
  while (!out.empty() && out.back() == '.') out.pop_back();
  out = trim(out);
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace

std::optional<double> parse_decimal(std::string_view s) {
  std::string t = trim(s);
  if (auto slash = t.find('/'); slash != std::string::npos) {
    auto num = parse_plain(std::string_view(t).substr(0, slash));
    auto den = parse_plain(std::string_view(t).substr(slash + 1));
    if (!num || !den || *den == 0.0) return std::nullopt;
    double v = *num / *den;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  }
  return parse_plain(t);
}

std::string format_decimal(double value) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%.9f", value);
  std::string out(buf);
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (out == "-0") out = "0";
  return out;
}

std::optional<std::string> normalize_answer(std::string_view raw,
                                            AnswerKind kind) {
  if (trim(raw).empty()) return std::nullopt;
  switch (kind) {
    case AnswerKind::kNumeric:
      return normalize_numeric(raw);
    case AnswerKind::kChoice:
      return normalize_choice(raw);
    case AnswerKind::kBoolean:
      return normalize_boolean(raw);
    case AnswerKind::kFreetext:
      return normalize_freetext(raw);
  }
  return std::nullopt;
}

bool compare_answers(const std::optional<std::string>& pred,
                     const AnswerSpec& gold) {
  if (!pred) return false;
  auto gold_norm = normalize_answer(gold.value, gold.kind);
  if (!gold_norm) return false;
  if (gold.kind != AnswerKind::kNumeric) return *pred == *gold_norm;
  auto a = parse_decimal(*pred);
  auto b = parse_decimal(*gold_norm);
  if (!a || !b) return false;
  double scale = std::max(std::fabs(*a), std::fabs(*b));
  return std::fabs(*a - *b) <= kNumericRelativeTolerance * scale;
}

Prediction make_prediction(std::string question_id, std::string raw_completion,
                           const AnswerSpec& gold) {
  Prediction p;
  p.question_id = std::move(question_id);
  p.extracted = normalize_answer(raw_completion, gold.kind);
  if (p.extracted) p.correct = compare_answers(p.extracted, gold);
  p.raw_completion = std::move(raw_completion);
  return p;
}

}  // namespace rop::core
