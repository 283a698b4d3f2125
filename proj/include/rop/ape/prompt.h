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

#ifndef ROP_APE_PROMPT_H_
#define ROP_APE_PROMPT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rop::ape {

enum class InstructionOrigin { kProposed, kSeeded };

struct Instruction {
  std::string text;
  // Set once the instruction has been scored.
  std::optional<double> score;
  InstructionOrigin origin = InstructionOrigin::kProposed;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct Demo {
  std::string input;
  std::string output;

  friend bool operator==(const Demo&, const Demo&) = default;
};

// An instruction plus in-context demonstrations.
struct Prompt {
  Instruction instruction;
  std::vector<Demo> demos;

  // Throws ConfigError when a demo input or output is empty.
  void validate() const;

  friend bool operator==(const Prompt&, const Prompt&) = default;
};

}  // namespace rop::ape

#endif  // ROP_APE_PROMPT_H_
