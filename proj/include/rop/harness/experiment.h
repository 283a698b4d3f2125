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

#ifndef ROP_HARNESS_EXPERIMENT_H_
#define ROP_HARNESS_EXPERIMENT_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rop/harness/config.h"
#include "rop/harness/records.h"
#include "rop/harness/report.h"
#include "rop/llm/backend.h"
#include "rop/perturb/tables.h"

namespace rop::harness {

// Overrides for what the config would otherwise construct.
struct ExperimentEnv {
  std::shared_ptr<llm::ChatBackend> backend;
  std::shared_ptr<llm::ChatBackend> perturbation_backend;
  std::optional<perturb::PerturbTables> tables;
  std::optional<pipeline::RopArtifacts> artifacts;
};

struct ExperimentResult {
  ResultTable table;
  // Records belonging to this run's cells, in canonical order.
  std::vector<RunRecord> records;
  std::size_t executed = 0;  // cells run now (not resumed)
  std::size_t resumed = 0;
  std::vector<std::string> warnings;
};

std::string records_path(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const ExperimentEnv& env = {});

// Replaces the config's perturbation list by every leveled type it names
// at each level. Duplicate levels are dropped with a warning; UIC or an
// empty level list is a ConfigError.
ExperimentResult level_sweep(const ExperimentConfig& cfg,
                             std::span<const int> levels,
                             const ExperimentEnv& env = {});

void write_reports(const ResultTable& table, const std::string& dir);

}  // namespace rop::harness

#endif  // ROP_HARNESS_EXPERIMENT_H_
