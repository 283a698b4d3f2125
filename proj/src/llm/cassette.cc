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

#include "rop/llm/cassette.h"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "rop/core/text.h"
#include "rop/llm/fingerprint.h"

namespace rop::llm {

std::string_view to_string(CassetteMode mode) {
  switch (mode) {
    case CassetteMode::kRecord: return "record";
    case CassetteMode::kReplay: return "replay";
    case CassetteMode::kPassthrough: return "passthrough";
  }
  return "replay";
}

std::optional<CassetteMode> parse_cassette_mode(std::string_view s) {
  if (s == "record") return CassetteMode::kRecord;
  if (s == "replay") return CassetteMode::kReplay;
  if (s == "passthrough") return CassetteMode::kPassthrough;
  return std::nullopt;
}

ReplayMissError::ReplayMissError(std::string fingerprint)
    : BackendError("replay miss: no cassette entry for fingerprint " + fingerprint),
      fingerprint_(std::move(fingerprint)) {}

namespace {

std::string entry_line(const std::string& fp, const nlohmann::json& request,
                       const Completion& response) {
  nlohmann::json line = {
      {"fingerprint", fp}, {"request", request}, {"response", to_json(response)}};
  return line.dump() + "\n";
}

}  // namespace

std::shared_ptr<Cassette> Cassette::load(const std::string& path) {
  if (!std::filesystem::exists(path)) return std::make_shared<Cassette>();
  return parse(core::read_file(path));
}

std::shared_ptr<Cassette> Cassette::parse(std::string_view jsonl) {
  auto cassette = std::make_shared<Cassette>();
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (core::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      std::string fp = j.at("fingerprint").get<std::string>();
      Entry entry{j.at("request"), completion_from_json(j.at("response"))};
      if (cassette->entries_.emplace(fp, std::move(entry)).second) {
        cassette->order_.push_back(fp);
      }
    } catch (const nlohmann::json::exception& e) {
      throw BackendError("cassette line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cassette;
}

std::optional<Completion> Cassette::lookup(const std::string& fingerprint) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(fingerprint);
  if (it == entries_.end()) return std::nullopt;
  return it->second.response;
}

bool Cassette::insert(const ChatRequest& req, const Completion& completion) {
  const std::string fp = fingerprint(req);
  std::unique_lock lock(mu_);
  Entry entry{to_json(req), completion};
  auto [it, inserted] = entries_.emplace(fp, entry);
  if (!inserted) return false;
  order_.push_back(fp);
  if (!attached_path_.empty()) {
    std::ofstream out(attached_path_, std::ios::app | std::ios::binary);
    if (!out) throw BackendError("cannot append to cassette '" + attached_path_ + "'");
    out << entry_line(fp, it->second.request, completion);
  }
  return true;
}

void Cassette::attach(const std::string& path) {
  std::unique_lock lock(mu_);
  attached_path_ = path;
}

void Cassette::save(const std::string& path) const {
  std::shared_lock lock(mu_);
  std::string out;
  for (const auto& fp : order_) {
    const Entry& e = entries_.at(fp);
    out += entry_line(fp, e.request, e.response);
  }
  core::write_file(path, out);
}

std::size_t Cassette::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

CassetteBackend::CassetteBackend(std::shared_ptr<Cassette> cassette,
                                 CassetteMode mode,
                                 std::shared_ptr<ChatBackend> inner,
                                 std::string model)
    : cassette_(std::move(cassette)),
      mode_(mode),
      inner_(std::move(inner)),
      model_(std::move(model)) {
  if (!cassette_) cassette_ = std::make_shared<Cassette>();
  if (mode_ != CassetteMode::kReplay && !inner_) {
    throw ConfigError(std::string("cassette mode '") + std::string(to_string(mode_)) +
                      "' needs an underlying backend");
  }
}

std::string CassetteBackend::model() const {
  if (!model_.empty()) return model_;
  return inner_ ? inner_->model() : std::string{};
}

std::size_t CassetteBackend::parallelism() const {
  return inner_ ? inner_->parallelism() : 8;
}

Completion CassetteBackend::complete(const ChatRequest& req) {
  const ChatRequest resolved = resolve_model(req, *this);
  const std::string fp = fingerprint(resolved);
  switch (mode_) {
    case CassetteMode::kReplay: {
      if (auto hit = cassette_->lookup(fp)) return *hit;
      throw ReplayMissError(fp);
    }
    case CassetteMode::kRecord: {
      if (auto hit = cassette_->lookup(fp)) return *hit;
      Completion c = inner_->complete(resolved);
      cassette_->insert(resolved, c);
      // Return what the cassette holds so a racing recorder cannot diverge.
      return cassette_->lookup(fp).value_or(c);
    }
    case CassetteMode::kPassthrough:
      return inner_->complete(resolved);
  }
  return inner_->complete(resolved);
}

}  // namespace rop::llm
