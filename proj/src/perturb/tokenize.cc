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

#include "rop/perturb/tokenize.h"

#include "rop/core/utf8.h"

namespace rop::perturb {
namespace {

bool in(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi; }

bool is_symbol_or_punct(char32_t c) {
  if (c < 0x80) {
    return !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
             (c >= '0' && c <= '9'));
  }
  return in(c, 0x00A1, 0x00BF) || c == 0x00D7 || c == 0x00F7 ||
         in(c, 0x2010, 0x2027) || in(c, 0x2030, 0x205E) ||
         in(c, 0x20A0, 0x20CF) || in(c, 0x2100, 0x214F) ||
         in(c, 0x2190, 0x2BFF) || in(c, 0x3001, 0x303F) ||
         in(c, 0xFF01, 0xFF0F) || in(c, 0xFF1A, 0xFF20) ||
         in(c, 0xFF3B, 0xFF40) || in(c, 0xFF5B, 0xFF65) ||
         in(c, 0xFE30, 0xFE4F) || in(c, 0x1F000, 0x1FAFF) || c == 0xFFFD;
}

}  // namespace

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f' || c == 0x0085 || c == 0x00A0 || c == 0x1680 ||
         in(c, 0x2000, 0x200A) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_letter(char32_t c) {
  if (is_space(c) || is_digit(c)) return false;
  if (c < 0x20 || c == 0x7F || in(c, 0x80, 0x9F)) return false;
  return !is_symbol_or_punct(c);
}

std::vector<Token> tokenize(std::u32string_view text) {
  std::vector<Token> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  auto emit = [&](TokenKind kind, std::size_t start, std::size_t end) {
    out.push_back({kind, start, end,
                   core::utf8::encode(text.substr(start, end - start))});
  };
  while (i < n) {
    const std::size_t start = i;
    const char32_t c = text[i];
    if (is_letter(c)) {
      while (i < n && is_letter(text[i])) ++i;
      emit(TokenKind::kWord, start, i);
    } else if (is_digit(c)) {
      while (i < n) {
        if (is_digit(text[i])) {
          ++i;
        } else if ((text[i] == '.' || text[i] == ',') && i + 1 < n &&
                   is_digit(text[i + 1])) {
          ++i;
        } else {
          break;
        }
      }
      emit(TokenKind::kNumber, start, i);
    } else if (is_space(c)) {
      while (i < n && is_space(text[i])) ++i;
      emit(TokenKind::kWhitespace, start, i);
    } else {
      ++i;
      emit(TokenKind::kPunctuation, start, i);
    }
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  return tokenize(std::u32string_view(core::utf8::decode(text)));
}

}  // namespace rop::perturb
