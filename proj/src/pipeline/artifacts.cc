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

#include "rop/pipeline/artifacts.h"

#include <filesystem>
#include <sstream>

#include "rop/core/errors.h"
#include "rop/core/text.h"
#include "rop/perturb/tables.h"

namespace rop::pipeline {

RopArtifacts ArtifactBundle::prompts() const {
  RopArtifacts out;
  if (correction) out.correction = correction->prompt();
  if (guidance) out.guidance = guidance->prompt();
  return out;
}

nlohmann::json to_json(const ArtifactBundle& bundle) {
  nlohmann::json j = nlohmann::json::object();
  if (bundle.correction) j["correction"] = ape::to_json(*bundle.correction);
  if (bundle.guidance) j["guidance"] = ape::to_json(*bundle.guidance);
  return j;
}

ArtifactBundle bundle_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("artifact bundle must be a JSON object");
  ArtifactBundle bundle;
  if (auto it = j.find("correction"); it != j.end() && !it->is_null()) {
    bundle.correction = ape::artifact_from_json(*it);
    if (bundle.correction->mode != ape::TaskMode::kCorrection) {
      throw ConfigError("bundle key \"correction\" holds a guidance artifact");
    }
  }
  if (auto it = j.find("guidance"); it != j.end() && !it->is_null()) {
    bundle.guidance = ape::artifact_from_json(*it);
    if (bundle.guidance->mode != ape::TaskMode::kGuidance) {
      throw ConfigError("bundle key \"guidance\" holds a correction artifact");
    }
  }
  return bundle;
}

void save_bundle(const ArtifactBundle& bundle, const std::string& path) {
  core::write_file(path, to_json(bundle).dump(2) + "\n");
}

ArtifactBundle load_bundle(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("artifact bundle '" + path + "' does not exist");
  }
  try {
    return bundle_from_json(nlohmann::json::parse(core::read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("artifact bundle '" + path + "': " + e.what());
  }
}

std::string default_cot_path() {
  return (std::filesystem::path(perturb::default_data_dir()) / "cot_exemplars.jsonl")
      .string();
}

ape::Prompt load_cot_prompt(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("CoT exemplar file '" + path + "' does not exist");
  }
  ape::Prompt prompt;
  std::istringstream in(core::read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (core::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      prompt.demos.push_back(
          {j.at("question").get<std::string>(), j.at("answer").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (prompt.demos.empty()) throw ConfigError("CoT exemplar file '" + path + "' is empty");
  prompt.validate();
  return prompt;
}

}  // namespace rop::pipeline
