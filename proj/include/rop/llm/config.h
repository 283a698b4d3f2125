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

#ifndef ROP_LLM_CONFIG_H_
#define ROP_LLM_CONFIG_H_

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rop/llm/backend.h"
#include "rop/llm/cassette.h"
#include "rop/llm/retry.h"

namespace rop::llm {

struct CassetteConfig {
  std::string path;
  CassetteMode mode = CassetteMode::kReplay;
};

struct BackendConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  std::string api_key_env = "ROP_API_KEY";
  double timeout_s = 60.0;
  int max_retries = 5;
  std::size_t parallelism = 4;
  // Evaluation, correction and scoring calls.
  double temperature = 0.0;
  // Instruction-candidate proposal calls.
  double proposal_temperature = 0.9;
  int max_tokens = 512;
  int initial_backoff_ms = 500;
  int max_backoff_ms = 30000;
  std::optional<CassetteConfig> cassette;

  // Throws ConfigError.
  void validate() const;
  RetryPolicy retry_policy() const;
};

// Relative cassette paths are resolved against `base_dir`.
BackendConfig backend_config_from_json(const nlohmann::json& j,
                                       const std::string& base_dir = {});
nlohmann::json to_json(const BackendConfig& cfg);
BackendConfig load_backend_config(const std::string& path);

// Live HTTP backend, optionally wrapped by a cassette. A replay cassette never
// constructs the HTTP client, so replay runs need no key and no network.
std::shared_ptr<ChatBackend> make_backend(const BackendConfig& cfg);

}  // namespace rop::llm

#endif  // ROP_LLM_CONFIG_H_
