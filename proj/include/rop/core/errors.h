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

#ifndef ROP_CORE_ERRORS_H_
#define ROP_CORE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rop {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating dataset input. `line()` is 1-based, 0 when
// the error is not tied to a line.
class DatasetError : public Error {
 public:
  DatasetError(const std::string& message, std::size_t line = 0)
      : Error(message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid configuration or a missing prerequisite (artifact, file, flag).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The requested perturbation cannot be applied to the given text.
class PerturbationError : public Error {
 public:
  using Error::Error;
};

// Failure talking to a completion backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace rop

#endif  // ROP_CORE_ERRORS_H_
