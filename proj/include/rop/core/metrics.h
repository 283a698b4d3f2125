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

#ifndef ROP_CORE_METRICS_H_
#define ROP_CORE_METRICS_H_

#include <cstddef>
#include <span>

#include "rop/core/types.h"

namespace rop::core {

// Fraction of records with correct == true. Undetermined counts as wrong.
// Throws rop::Error on an empty list.
double accuracy(std::span<const Prediction> records);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval; z defaults to the two-sided 95% quantile.
Interval wilson_interval(std::size_t successes, std::size_t n,
                         double z = 1.959963984540054);

}  // namespace rop::core

#endif  // ROP_CORE_METRICS_H_
