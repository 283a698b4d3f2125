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

#include "rop/llm/config.h"

#include <filesystem>

#include "rop/core/errors.h"
#include "rop/core/text.h"
#include "rop/llm/http_backend.h"

namespace rop::llm {

void BackendConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("backend: " + msg); };
  if (endpoint.empty()) fail("endpoint must not be empty");
  if (model.empty()) fail("model must not be empty");
  if (!(timeout_s > 0)) fail("timeout must be > 0");
  if (max_retries < 0) fail("max_retries must be >= 0");
  if (parallelism < 1) fail("parallelism must be >= 1");
  if (!(temperature >= 0)) fail("temperature must be >= 0");
  if (!(proposal_temperature >= 0)) fail("proposal_temperature must be >= 0");
  if (max_tokens < 1) fail("max_tokens must be >= 1");
  if (initial_backoff_ms < 0 || max_backoff_ms < initial_backoff_ms) {
    fail("backoff bounds must satisfy 0 <= initial_backoff_ms <= max_backoff_ms");
  }
  if (cassette && cassette->path.empty()) fail("cassette.path must not be empty");
}

RetryPolicy BackendConfig::retry_policy() const {
  RetryPolicy p;
  p.max_retries = max_retries;
  p.initial_delay = std::chrono::milliseconds(initial_backoff_ms);
  p.max_delay = std::chrono::milliseconds(max_backoff_ms);
  return p;
}

BackendConfig backend_config_from_json(const nlohmann::json& j,
                                       const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("backend config must be a JSON object");
  BackendConfig cfg;
  try {
    cfg.endpoint = j.value("endpoint", cfg.endpoint);
    cfg.model = j.value("model", cfg.model);
    cfg.api_key_env = j.value("api_key_env", cfg.api_key_env);
    cfg.timeout_s = j.value("timeout", cfg.timeout_s);
    cfg.max_retries = j.value("max_retries", cfg.max_retries);
    cfg.parallelism = j.value("parallelism", cfg.parallelism);
    cfg.temperature = j.value("temperature", cfg.temperature);
    cfg.proposal_temperature = j.value("proposal_temperature", cfg.proposal_temperature);
    cfg.max_tokens = j.value("max_tokens", cfg.max_tokens);
    cfg.initial_backoff_ms = j.value("initial_backoff_ms", cfg.initial_backoff_ms);
    cfg.max_backoff_ms = j.value("max_backoff_ms", cfg.max_backoff_ms);
    if (auto it = j.find("cassette"); it != j.end() && !it->is_null()) {
      CassetteConfig cc;
      std::filesystem::path p = it->at("path").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      cc.path = p.string();
      const std::string mode = it->value("mode", std::string("replay"));
      auto parsed = parse_cassette_mode(mode);
      if (!parsed) throw ConfigError("backend: unknown cassette mode '" + mode + "'");
      cc.mode = *parsed;
      cfg.cassette = cc;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("backend config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const BackendConfig& cfg) {
  nlohmann::json j = {{"endpoint", cfg.endpoint},
                      {"model", cfg.model},
                      {"api_key_env", cfg.api_key_env},
                      {"timeout", cfg.timeout_s},
                      {"max_retries", cfg.max_retries},
                      {"parallelism", cfg.parallelism},
                      {"temperature", cfg.temperature},
                      {"proposal_temperature", cfg.proposal_temperature},
                      {"max_tokens", cfg.max_tokens},
                      {"initial_backoff_ms", cfg.initial_backoff_ms},
                      {"max_backoff_ms", cfg.max_backoff_ms}};
  if (cfg.cassette) {
    j["cassette"] = {{"path", cfg.cassette->path},
                     {"mode", std::string(to_string(cfg.cassette->mode))}};
  }
  return j;
}

BackendConfig load_backend_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(core::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("backend config '" + path + "': " + e.what());
  }
  return backend_config_from_json(
      j, std::filesystem::path(path).parent_path().string());
}

std::shared_ptr<ChatBackend> make_backend(const BackendConfig& cfg) {
  cfg.validate();
  if (cfg.cassette && cfg.cassette->mode == CassetteMode::kReplay) {
    if (!std::filesystem::exists(cfg.cassette->path)) {
      throw ConfigError("replay cassette '" + cfg.cassette->path + "' does not exist");
    }
    return std::make_shared<CassetteBackend>(Cassette::load(cfg.cassette->path),
                                             CassetteMode::kReplay, nullptr,
                                             cfg.model);
  }
  auto http = std::make_shared<HttpBackend>(cfg);
  if (!cfg.cassette) return http;
  auto cassette = Cassette::load(cfg.cassette->path);
  if (cfg.cassette->mode == CassetteMode::kRecord) cassette->attach(cfg.cassette->path);
  return std::make_shared<CassetteBackend>(cassette, cfg.cassette->mode, http,
                                           cfg.model);
}

}  // namespace rop::llm
