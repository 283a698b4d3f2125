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

#ifndef ROP_HARNESS_RECORDS_H_
#define ROP_HARNESS_RECORDS_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rop/llm/types.h"
#include "rop/perturb/types.h"

namespace rop::harness {

enum class RecordStatus { kOk, kError, kSkipped };

std::string_view to_string(RecordStatus s);
std::optional<RecordStatus> parse_record_status(std::string_view s);

struct RunRecord {
  std::string dataset;
  std::string question_id;
  std::string method;        // label, e.g. "RoP"
  std::string perturbation;  // cell name, e.g. "none", "EC"
  int level = 0;
  std::uint64_t seed = 0;

  RecordStatus status = RecordStatus::kOk;
  std::string error_class;
  std::string error_message;

  std::string original_text;
  std::string perturbed_text;
  std::vector<perturb::Edit> edits;
  std::optional<std::string> corrected_text;
  bool correction_fallback = false;
  std::string raw_completion;
  std::optional<std::string> extracted;
  std::optional<bool> correct;
  std::string gold;
  std::string request_fingerprint;
  double latency_ms = 0.0;
  llm::Usage usage;

  // (dataset, question, method, perturbation, level, seed)
  std::string key() const;
};

nlohmann::json to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);

// Reads a JSONL log; later records replace earlier ones with the same key.
std::vector<RunRecord> load_records(const std::string& path);

// Append-only JSONL log with serialized writes.
class RecordLog {
 public:
  explicit RecordLog(std::string path);

  // Latest record for a key, if any.
  std::optional<RunRecord> find(const std::string& key) const;
  void append(const RunRecord& r);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, RunRecord> latest_;
};

}  // namespace rop::harness

#endif  // ROP_HARNESS_RECORDS_H_
