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

#ifndef ROP_LLM_CASSETTE_H_
#define ROP_LLM_CASSETTE_H_

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "rop/core/errors.h"
#include "rop/llm/backend.h"
#include "rop/llm/types.h"

namespace rop::llm {

enum class CassetteMode { kRecord, kReplay, kPassthrough };

std::string_view to_string(CassetteMode mode);
std::optional<CassetteMode> parse_cassette_mode(std::string_view s);

class ReplayMissError : public BackendError {
 public:
  explicit ReplayMissError(std::string fingerprint);
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::string fingerprint_;
};

// Recorded request fingerprint -> completion map, persisted as JSONL of
// {"fingerprint", "request", "response"}. Reads may run concurrently; writes
// are serialized. The first recording of a fingerprint wins.
class Cassette {
 public:
  Cassette() = default;

  // A missing file yields an empty cassette.
  static std::shared_ptr<Cassette> load(const std::string& path);
  static std::shared_ptr<Cassette> parse(std::string_view jsonl);

  std::optional<Completion> lookup(const std::string& fingerprint) const;

  // Returns false when the fingerprint was already present. When the
  // cassette is attached to a file the entry is appended immediately.
  bool insert(const ChatRequest& req, const Completion& completion);

  // Subsequent inserts are appended to `path`.
  void attach(const std::string& path);

  void save(const std::string& path) const;
  std::size_t size() const;

 private:
  struct Entry {
    nlohmann::json request;
    Completion response;
  };
  mutable std::shared_mutex mu_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
  std::string attached_path_;
};

// Backend that serves (replay), captures (record) or bypasses (passthrough)
// a cassette. `inner` may be null in replay mode.
class CassetteBackend : public ChatBackend {
 public:
  CassetteBackend(std::shared_ptr<Cassette> cassette, CassetteMode mode,
                  std::shared_ptr<ChatBackend> inner, std::string model = {});

  Completion complete(const ChatRequest& req) override;
  std::string model() const override;
  std::size_t parallelism() const override;

  Cassette& cassette() { return *cassette_; }

 private:
  std::shared_ptr<Cassette> cassette_;
  CassetteMode mode_;
  std::shared_ptr<ChatBackend> inner_;
  std::string model_;
};

}  // namespace rop::llm

#endif  // ROP_LLM_CASSETTE_H_
