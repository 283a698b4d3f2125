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

#include "rop/ape/artifact.h"

#include <filesystem>

#include "rop/core/errors.h"
#include "rop/core/text.h"

namespace rop::ape {

Prompt InstructionArtifact::prompt() const {
  Prompt p;
  p.instruction = {instruction, score, InstructionOrigin::kProposed};
  p.demos = demos;
  return p;
}

nlohmann::json to_json(const InstructionArtifact& a) {
  nlohmann::json demos = nlohmann::json::array();
  for (const auto& d : a.demos) demos.push_back({{"input", d.input}, {"output", d.output}});
  return {{"mode", std::string(to_string(a.mode))},
          {"instruction", a.instruction},
          {"score", a.score},
          {"demos", std::move(demos)},
          {"provenance",
           {{"seed", a.provenance.seed},
            {"n_candidates", a.provenance.n_candidates},
            {"model", a.provenance.model}}}};
}

InstructionArtifact artifact_from_json(const nlohmann::json& j) {
  InstructionArtifact a;
  try {
    const std::string mode = j.at("mode").get<std::string>();
    auto parsed = parse_task_mode(mode);
    if (!parsed) throw ConfigError("artifact: unknown mode '" + mode + "'");
    a.mode = *parsed;
    a.instruction = j.at("instruction").get<std::string>();
    a.score = j.value("score", 0.0);
    for (const auto& d : j.at("demos")) {
      a.demos.push_back({d.at("input").get<std::string>(), d.at("output").get<std::string>()});
    }
    if (auto it = j.find("provenance"); it != j.end() && it->is_object()) {
      a.provenance.seed = it->value("seed", std::uint64_t{0});
      a.provenance.n_candidates = it->value("n_candidates", std::size_t{0});
      a.provenance.model = it->value("model", std::string{});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("artifact: ") + e.what());
  }
  a.prompt().validate();
  return a;
}

void save_artifact(const InstructionArtifact& a, const std::string& path) {
  core::write_file(path, to_json(a).dump(2) + "\n");
}

InstructionArtifact load_artifact(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("artifact file '" + path + "' does not exist");
  }
  try {
    return artifact_from_json(nlohmann::json::parse(core::read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("artifact '" + path + "': " + e.what());
  }
}

}  // namespace rop::ape
