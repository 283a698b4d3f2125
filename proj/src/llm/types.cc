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

#include "rop/llm/types.h"

#include "rop/core/errors.h"

namespace rop::llm {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "system") return Role::kSystem;
  if (s == "user") return Role::kUser;
  if (s == "assistant") return Role::kAssistant;
  return std::nullopt;
}

Completion text_completion(std::string text) {
  Completion c;
  c.text = std::move(text);
  return c;
}

nlohmann::json to_json(const ChatRequest& req) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : req.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  return {{"model", req.model},
          {"messages", std::move(messages)},
          {"temperature", req.temperature},
          {"max_tokens", req.max_tokens}};
}

ChatRequest request_from_json(const nlohmann::json& j) {
  try {
    ChatRequest req;
    req.model = j.value("model", std::string{});
    for (const auto& m : j.at("messages")) {
      auto role = parse_role(m.at("role").get<std::string>());
      if (!role) throw BackendError("unknown message role " + m.at("role").dump());
      req.messages.push_back({*role, m.at("content").get<std::string>()});
    }
    req.temperature = j.value("temperature", 0.0);
    req.max_tokens = j.value("max_tokens", 512);
    return req;
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("malformed request record: ") + e.what());
  }
}

nlohmann::json to_json(const Completion& c) {
  return {{"text", c.text},
          {"finish_reason", c.finish_reason},
          {"usage",
           {{"prompt_tokens", c.usage.prompt_tokens},
            {"completion_tokens", c.usage.completion_tokens},
            {"total_tokens", c.usage.total_tokens}}}};
}

Completion completion_from_json(const nlohmann::json& j) {
  try {
    Completion c;
    c.text = j.at("text").get<std::string>();
    c.finish_reason = j.value("finish_reason", std::string("stop"));
    if (auto it = j.find("usage"); it != j.end() && it->is_object()) {
      c.usage.prompt_tokens = it->value("prompt_tokens", 0);
      c.usage.completion_tokens = it->value("completion_tokens", 0);
      c.usage.total_tokens = it->value("total_tokens", 0);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("malformed completion record: ") + e.what());
  }
}

}  // namespace rop::llm
