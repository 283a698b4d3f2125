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

#include "rop/harness/records.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rop/core/errors.h"
#include "rop/core/text.h"

namespace rop::harness {

std::string_view to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::kOk: return "ok";
    case RecordStatus::kError: return "error";
    case RecordStatus::kSkipped: return "skipped";
  }
  return "ok";
}

std::optional<RecordStatus> parse_record_status(std::string_view s) {
  if (s == "ok") return RecordStatus::kOk;
  if (s == "error") return RecordStatus::kError;
  if (s == "skipped") return RecordStatus::kSkipped;
  return std::nullopt;
}

std::string RunRecord::key() const {
  nlohmann::json k = {dataset, question_id, method, perturbation, level, seed};
  return k.dump();
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : r.edits) {
    edits.push_back({{"start", e.start}, {"end", e.end}, {"before", e.before}, {"after", e.after}});
  }
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  return {{"dataset", r.dataset},
          {"question_id", r.question_id},
          {"method", r.method},
          {"perturbation", r.perturbation},
          {"level", r.level},
          {"seed", r.seed},
          {"status", std::string(to_string(r.status))},
          {"error_class", r.error_class},
          {"error_message", r.error_message},
          {"original_text", r.original_text},
          {"perturbed_text", r.perturbed_text},
          {"edits", std::move(edits)},
          {"corrected_text", opt(r.corrected_text)},
          {"correction_fallback", r.correction_fallback},
          {"raw_completion", r.raw_completion},
          {"extracted", opt(r.extracted)},
          {"correct", opt(r.correct)},
          {"gold", r.gold},
          {"request_fingerprint", r.request_fingerprint},
          {"latency_ms", r.latency_ms},
          {"usage",
           {{"prompt_tokens", r.usage.prompt_tokens},
            {"completion_tokens", r.usage.completion_tokens},
            {"total_tokens", r.usage.total_tokens}}}};
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.dataset = j.at("dataset").get<std::string>();
    r.question_id = j.at("question_id").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.perturbation = j.at("perturbation").get<std::string>();
    r.level = j.value("level", 0);
    r.seed = j.value("seed", std::uint64_t{0});
    const std::string status = j.value("status", std::string("ok"));
    auto parsed = parse_record_status(status);
    if (!parsed) throw DatasetError("record has unknown status '" + status + "'");
    r.status = *parsed;
    r.error_class = j.value("error_class", std::string{});
    r.error_message = j.value("error_message", std::string{});
    r.original_text = j.value("original_text", std::string{});
    r.perturbed_text = j.value("perturbed_text", std::string{});
    if (auto it = j.find("edits"); it != j.end() && it->is_array()) {
      for (const auto& e : *it) {
        r.edits.push_back({e.at("start").get<std::size_t>(), e.at("end").get<std::size_t>(),
                           e.at("before").get<std::string>(),
                           e.at("after").get<std::string>(), perturb::PerturbationType::kEC});
        if (auto t = perturb::parse_perturbation_type(r.perturbation)) r.edits.back().kind = *t;
      }
    }
    if (auto it = j.find("corrected_text"); it != j.end() && it->is_string()) {
      r.corrected_text = it->get<std::string>();
    }
    r.correction_fallback = j.value("correction_fallback", false);
    r.raw_completion = j.value("raw_completion", std::string{});
    if (auto it = j.find("extracted"); it != j.end() && it->is_string()) {
      r.extracted = it->get<std::string>();
    }
    if (auto it = j.find("correct"); it != j.end() && it->is_boolean()) {
      r.correct = it->get<bool>();
    }
    r.gold = j.value("gold", std::string{});
    r.request_fingerprint = j.value("request_fingerprint", std::string{});
    r.latency_ms = j.value("latency_ms", 0.0);
    if (auto it = j.find("usage"); it != j.end() && it->is_object()) {
      r.usage.prompt_tokens = it->value("prompt_tokens", 0);
      r.usage.completion_tokens = it->value("completion_tokens", 0);
      r.usage.total_tokens = it->value("total_tokens", 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("malformed run record: ") + e.what());
  }
  return r;
}

namespace {

std::vector<RunRecord> read_log(const std::string& path) {
  std::vector<RunRecord> out;
  std::map<std::string, std::size_t> index;
  std::istringstream in(core::read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (core::trim(line).empty()) continue;
    RunRecord r;
    try {
      r = record_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error&) {
      // A torn final line from an interrupted run is dropped.
      continue;
    } catch (const DatasetError& e) {
      throw DatasetError(path + ":" + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    auto [it, inserted] = index.emplace(r.key(), out.size());
    if (inserted) {
      out.push_back(std::move(r));
    } else {
      out[it->second] = std::move(r);
    }
  }
  return out;
}

}  // namespace

std::vector<RunRecord> load_records(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw DatasetError("record log '" + path + "' does not exist");
  if (!fs::is_directory(path)) return read_log(path);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunRecord> out;
  for (const auto& f : files) {
    auto part = read_log(f.string());
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

RecordLog::RecordLog(std::string path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    for (auto& r : read_log(path_)) {
      std::string k = r.key();
      latest_[k] = std::move(r);
    }
  } else {
    const auto parent = std::filesystem::path(path_).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
  }
}

std::optional<RunRecord> RecordLog::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = latest_.find(key);
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

void RecordLog::append(const RunRecord& r) {
  const std::string line = to_json(r).dump() + "\n";
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot append to record log '" + path_ + "'");
  out << line;
  out.flush();
  latest_[r.key()] = r;
}

}  // namespace rop::harness
