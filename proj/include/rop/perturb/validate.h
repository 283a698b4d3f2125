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

#ifndef ROP_PERTURB_VALIDATE_H_
#define ROP_PERTURB_VALIDATE_H_

#include <optional>
#include <string_view>
#include <vector>

#include "rop/perturb/tables.h"
#include "rop/perturb/types.h"

namespace rop::perturb {

// Checks that `candidate` is a legal `type` perturbation of `original` under
// `cfg` (same edit budget, table membership, number protection) and returns
// the edits that produce it. nullopt when the candidate does not qualify.
// UIC is not handled here; see perturb_uic.
std::optional<std::vector<Edit>> derive_edits(std::string_view original,
                                              std::string_view candidate,
                                              PerturbationType type,
                                              const PerturbationConfig& cfg,
                                              const PerturbTables& tables);

}  // namespace rop::perturb

#endif  // ROP_PERTURB_VALIDATE_H_
