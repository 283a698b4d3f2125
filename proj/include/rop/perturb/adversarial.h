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

#ifndef ROP_PERTURB_ADVERSARIAL_H_
#define ROP_PERTURB_ADVERSARIAL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rop/core/types.h"
#include "rop/llm/backend.h"
#include "rop/perturb/perturb.h"
#include "rop/perturb/types.h"

namespace rop::perturb {

struct AdversarialPair {
  core::Question original;
  PerturbedQuestion perturbed;

  friend bool operator==(const AdversarialPair&, const AdversarialPair&) = default;
};

struct AdversarialDataset {
  std::vector<AdversarialPair> pairs;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::vector<PerturbationType> types;
  int level = 1;
  // Ids of training questions skipped as ineligible.
  std::vector<std::string> skipped;
};

struct AdversarialOptions {
  // Skip questions a perturbation cannot be applied to and keep drawing;
  // when false the first PerturbationError propagates.
  bool skip_ineligible = true;
  PerturbOptions perturb;
};

// Per-question perturbation seed, shared with the experiment harness:
// derive_seed(seed, {question id, type, level}).
std::uint64_t question_seed(std::uint64_t seed, const std::string& question_id,
                            PerturbationType type, int level);

// Draws training questions in seeded order and perturbs them, assigning
// types round-robin over `types` (in a seeded order) until k pairs exist or
// the training set runs out. cfg.seed is not used; per-question seeds come
// from question_seed(seed, ...).
AdversarialDataset generate_adversarial(const core::Dataset& train,
                                        std::size_t k,
                                        std::span<const PerturbationType> types,
                                        const PerturbationConfig& cfg,
                                        std::uint64_t seed,
                                        const PerturbTables& tables,
                                        llm::ChatBackend* backend = nullptr,
                                        const AdversarialOptions& opts = {});

// One adversarial JSONL record:
// {"id", "original", "perturbed", "type", "answer", "answer_kind", "edits",
//  "choices"?}
nlohmann::json pair_to_json(const AdversarialPair& pair);
// Throws DatasetError; verifies that the edits reproduce the perturbed text.
AdversarialPair pair_from_json(const nlohmann::json& j, std::size_t line = 0);

// Writes the JSONL records to `path` and the generation metadata to
// `path + ".meta.json"`.
void save_adversarial(const AdversarialDataset& adv, const std::string& path);
// Metadata is read when the sidecar exists.
AdversarialDataset load_adversarial(const std::string& path);

}  // namespace rop::perturb

#endif  // ROP_PERTURB_ADVERSARIAL_H_
