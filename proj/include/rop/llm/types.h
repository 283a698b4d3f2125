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

#ifndef ROP_LLM_TYPES_H_
#define ROP_LLM_TYPES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rop::llm {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view s);

struct Message {
  Role role = Role::kUser;
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

struct ChatRequest {
  // Empty means "the backend's configured model".
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  int max_tokens = 512;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int total_tokens = 0;

  friend bool operator==(const Usage&, const Usage&) = default;
};

struct Completion {
  std::string text;
  std::string finish_reason = "stop";
  Usage usage;

  friend bool operator==(const Completion&, const Completion&) = default;
};

// Completion with finish_reason "stop" and no usage.
Completion text_completion(std::string text);

nlohmann::json to_json(const ChatRequest& req);
ChatRequest request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Completion& c);
Completion completion_from_json(const nlohmann::json& j);

}  // namespace rop::llm

#endif  // ROP_LLM_TYPES_H_
