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

#ifndef ROP_PIPELINE_ARTIFACTS_H_
#define ROP_PIPELINE_ARTIFACTS_H_

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rop/ape/artifact.h"
#include "rop/ape/prompt.h"

namespace rop::pipeline {

struct RopArtifacts {
  // in_ec with perturbed->original demos.
  std::optional<ape::Prompt> correction;
  // in_opt with question->answer demos.
  std::optional<ape::Prompt> guidance;
  // Fixed chain-of-thought exemplars.
  std::optional<ape::Prompt> cot;
};

struct ArtifactBundle {
  std::optional<ape::InstructionArtifact> correction;
  std::optional<ape::InstructionArtifact> guidance;

  RopArtifacts prompts() const;
};

nlohmann::json to_json(const ArtifactBundle& bundle);
ArtifactBundle bundle_from_json(const nlohmann::json& j);
void save_bundle(const ArtifactBundle& bundle, const std::string& path);
ArtifactBundle load_bundle(const std::string& path);

// JSONL of {"question": ..., "answer": ...} worked examples.
ape::Prompt load_cot_prompt(const std::string& path);
std::string default_cot_path();

}  // namespace rop::pipeline

#endif  // ROP_PIPELINE_ARTIFACTS_H_
