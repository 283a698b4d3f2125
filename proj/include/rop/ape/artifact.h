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

#ifndef ROP_APE_ARTIFACT_H_
#define ROP_APE_ARTIFACT_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rop/ape/prompt.h"
#include "rop/ape/task.h"

namespace rop::ape {

struct Provenance {
  std::uint64_t seed = 0;
  std::size_t n_candidates = 0;
  std::string model;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct InstructionArtifact {
  TaskMode mode = TaskMode::kCorrection;
  std::string instruction;
  double score = 0.0;
  std::vector<Demo> demos;
  Provenance provenance;

  Prompt prompt() const;

  friend bool operator==(const InstructionArtifact&,
                         const InstructionArtifact&) = default;
};

nlohmann::json to_json(const InstructionArtifact& a);
InstructionArtifact artifact_from_json(const nlohmann::json& j);

void save_artifact(const InstructionArtifact& a, const std::string& path);
InstructionArtifact load_artifact(const std::string& path);

}  // namespace rop::ape

#endif  // ROP_APE_ARTIFACT_H_
