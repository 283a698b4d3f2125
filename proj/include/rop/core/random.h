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

#ifndef ROP_CORE_RANDOM_H_
#define ROP_CORE_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace rop::core {

// Seeded generator whose outputs are identical on every platform. The
// standard distributions are implementation-defined, so bounded draws are
// done here by rejection over the (fully specified) mt19937_64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, n). n must be > 0.
  std::uint64_t uniform(std::uint64_t n);

  bool coin() { return uniform(2) == 1; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform(i)]);
    }
  }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[uniform(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

// Stable 64-bit seed derived from a base seed and string parts (FNV-1a over a
// length-prefixed encoding, then a splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::string_view> parts);

}  // namespace rop::core

#endif  // ROP_CORE_RANDOM_H_
