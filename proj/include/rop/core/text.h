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

#ifndef ROP_CORE_TEXT_H_
#define ROP_CORE_TEXT_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rop::core {

std::string trim(std::string_view s);

// Trims and collapses every run of ASCII whitespace to a single space.
std::string collapse_whitespace(std::string_view s);

std::string to_lower_ascii(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Replaces `{{name}}` placeholders. Unknown placeholders throw ConfigError so a
// typo in a prompt file cannot silently leak into a request.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& vars);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace rop::core

#endif  // ROP_CORE_TEXT_H_
