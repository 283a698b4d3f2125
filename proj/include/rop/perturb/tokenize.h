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

#ifndef ROP_PERTURB_TOKENIZE_H_
#define ROP_PERTURB_TOKENIZE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rop::perturb {

enum class TokenKind { kWord, kNumber, kWhitespace, kPunctuation };

// `start`/`end` are code-point offsets into the input.
struct Token {
  TokenKind kind;
  std::size_t start;
  std::size_t end;
  std::string text;

  friend bool operator==(const Token&, const Token&) = default;
};

// Letters outside ASCII count as alphabetic unless they fall in a known
// punctuation, symbol or space block.
bool is_letter(char32_t c);
bool is_space(char32_t c);
bool is_digit(char32_t c);

// Splits text into words (maximal letter runs), numbers (maximal digit runs,
// with '.' or ',' kept only between digits), whitespace runs and single
// punctuation characters. Concatenating the token texts gives the input back.
std::vector<Token> tokenize(std::string_view text);
std::vector<Token> tokenize(std::u32string_view text);

}  // namespace rop::perturb

#endif  // ROP_PERTURB_TOKENIZE_H_
