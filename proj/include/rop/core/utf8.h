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

#ifndef ROP_CORE_UTF8_H_
#define ROP_CORE_UTF8_H_

#include <string>
#include <string_view>

namespace rop::core::utf8 {

bool is_valid(std::string_view bytes);

// Throws rop::Error on malformed input.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view code_points);
std::string encode(char32_t code_point);

// Number of code points; throws on malformed input.
std::size_t length(std::string_view bytes);

}  // namespace rop::core::utf8

#endif  // ROP_CORE_UTF8_H_
