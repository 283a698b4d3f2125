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

#ifndef ROP_HARNESS_CONFIG_H_
#define ROP_HARNESS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rop/llm/config.h"
#include "rop/perturb/types.h"
#include "rop/pipeline/pipeline.h"

namespace rop::harness {

// One perturbation stratum. An empty type is the clean ("No Pert.") cell.
// Clean and UIC cells carry level 0.
struct PerturbationCell {
  std::optional<perturb::PerturbationType> type;
  int level = 0;

  friend bool operator==(const PerturbationCell&, const PerturbationCell&) = default;
};

// "none", "EC", "SC", ...
std::string cell_name(const PerturbationCell& cell);

// Accepts "none", "UIC", "EC:4" or an object {"type": ..., "level": ...}.
PerturbationCell parse_cell(const nlohmann::json& j);

struct ExperimentConfig {
  std::vector<std::string> datasets;
  std::vector<pipeline::Method> methods;
  std::vector<PerturbationCell> perturbations;
  std::vector<std::uint64_t> seeds = {0};
  llm::BackendConfig backend;
  // Used for UIC (and via_llm rewrites); UIC falls back to the built-in
  // distractor bank when absent.
  std::optional<llm::BackendConfig> perturbation_backend;
  bool perturb_via_llm = false;
  std::string artifacts;
  // Empty selects the shipped exemplar file.
  std::string cot_exemplars;
  std::string output_dir = "results";
  std::optional<std::size_t> sample_limit;
  // Tables and prompt templates; empty selects the default data dir.
  std::string data_dir;
  bool protect_numbers = true;
  int min_word_len = 3;
  perturb::EcMode ec_mode = perturb::EcMode::kMixed;
  pipeline::PipelineOptions pipeline;

  // Throws ConfigError.
  void validate() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::string& base_dir = {});
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace rop::harness

#endif  // ROP_HARNESS_CONFIG_H_
