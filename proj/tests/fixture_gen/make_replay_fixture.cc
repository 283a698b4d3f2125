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

// Regenerates tests/fixtures/replay/ by running the harness against a
// deterministic fake model in cassette record mode.
//
//   make_replay_fixture [OUT_DIR]

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "rop/core/dataset.h"
#include "rop/core/text.h"
#include "rop/core/utf8.h"
#include "rop/harness/config.h"
#include "rop/harness/experiment.h"
#include "rop/harness/report.h"
#include "rop/llm/backend.h"
#include "rop/llm/cassette.h"
#include "rop/pipeline/artifacts.h"

namespace {

namespace fs = std::filesystem;
using namespace rop;

constexpr const char* kModel = "fixture-model";
constexpr const char* kCorrectionInstruction =
    "Rewrite the question so that it reads as intended, removing typos and any "
    "sentence that does not matter for the answer. Reply with the question only.";
constexpr const char* kGuidanceInstruction =
    "Solve the problem step by step and end with \"The answer is N\".";

std::uint64_t fnv(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

std::size_t char_distance(std::string_view a, std::string_view b) {
  const auto x = core::utf8::decode(a);
  const auto y = core::utf8::decode(b);
  if (x.size() != y.size()) return SIZE_MAX;
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
  return d;
}

class FakeModel {
 public:
  explicit FakeModel(const core::Dataset& ds) {
    for (const auto& q : ds.questions) gold_[q.text] = q.answer.value;
  }

  llm::Completion operator()(const llm::ChatRequest& req) const {
    const std::string& query = req.messages.back().content;
    const bool has_system = req.messages.front().role == llm::Role::kSystem;
    const std::uint64_t h = fnv(llm::to_json(req).dump());
    if (has_system && req.messages.front().content == kCorrectionInstruction) {
      return usage(llm::text_completion(correct(query, h)), req);
    }
    std::string reply;
    if (auto it = gold_.find(query); it != gold_.end()) {
      reply = h % 7 == 0 ? wrong(it->second) : right(it->second);
    } else {
      const std::string g = nearest_gold(query);
      const bool ok = has_system ? h % 3 != 0 : h % 2 == 0;
      reply = ok ? right(g) : wrong(g);
    }
    return usage(llm::text_completion(reply), req);
  }

 private:
  static llm::Completion usage(llm::Completion c, const llm::ChatRequest& req) {
    int prompt = 0;
    for (const auto& m : req.messages) prompt += static_cast<int>(m.content.size() / 4) + 1;
    const int completion = static_cast<int>(c.text.size() / 4) + 1;
    c.usage = {prompt, completion, prompt + completion};
    return c;
  }

  static std::string right(const std::string& g) {
    return "Working through the numbers gives " + g + ". The answer is " + g + ".";
  }

  static std::string wrong(const std::string& g) {
    const auto v = std::stoll(g) + 1;
    return "I think it comes to " + std::to_string(v) + ". The answer is " +
           std::to_string(v) + ".";
  }

  std::string nearest_gold(const std::string& text) const {
    for (const auto& [original, g] : gold_) {
      if (text.starts_with(original) || char_distance(original, text) <= 8) return g;
    }
    return "0";
  }

  std::string correct(const std::string& text, std::uint64_t h) const {
    for (const auto& [original, g] : gold_) {
      if (text == original) return original;
      // Distractor removal succeeds most of the time.
      if (text.starts_with(original)) return h % 5 == 0 ? text : original;
      if (char_distance(original, text) <= 2) return h % 4 == 0 ? text : original;
    }
    return text;
  }

  std::map<std::string, std::string> gold_;
};

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path(ROP_FIXTURE_DIR) / "replay";
  fs::create_directories(out);
  const fs::path dataset = fs::path(ROP_FIXTURE_DIR) / "arith12.jsonl";
  const auto ds = core::load_dataset(dataset.string(), core::Split::kTest);

  pipeline::ArtifactBundle bundle;
  bundle.correction = ape::InstructionArtifact{
      ape::TaskMode::kCorrection,
      kCorrectionInstruction,
      0.75,
      {{"Hwo many pencils does Ann have if she buys 4 packs of 6?",
        "How many pencils does Ann have if she buys 4 packs of 6?"},
       {"Leo walks 3 miles a day. The town hall was painted blue 12 years ago. How far "
        "does he walk in 5 days?",
        "Leo walks 3 miles a day. How far does he walk in 5 days?"}},
      {0, 4, kModel}};
  bundle.guidance = ape::InstructionArtifact{
      ape::TaskMode::kGuidance,
      kGuidanceInstruction,
      1.0,
      {{"A shelf holds 8 books. How many books do 3 shelves hold?",
        "Each shelf holds 8 books, so 3 shelves hold 3 * 8 = 24. The answer is 24."}},
      {0, 4, kModel}};
  pipeline::save_bundle(bundle, (out / "bundle.json").string());

  const fs::path cassette_path = out / "cassette.jsonl";
  fs::remove(cassette_path);
  nlohmann::json config = {
      {"datasets", {fs::relative(dataset, out).generic_string()}},
      {"methods", {"stand", "cot", "go", "co", "rop"}},
      {"perturbations", {"EC:1", "UIC"}},
      {"seeds", {0}},
      {"artifacts", "bundle.json"},
      {"output_dir", "out"},
      {"backend",
       {{"model", kModel},
        {"temperature", 0.0},
        {"max_tokens", 256},
        {"cassette", {{"path", "cassette.jsonl"}, {"mode", "replay"}}}}}};
  core::write_file((out / "config.json").string(), config.dump(2) + "\n");

  auto cfg = harness::load_experiment_config((out / "config.json").string());
  const fs::path scratch = fs::temp_directory_path() / "rop_fixture_run";
  fs::remove_all(scratch);
  cfg.output_dir = scratch.string();

  auto cassette = std::make_shared<llm::Cassette>();
  harness::ExperimentEnv env;
  env.backend = std::make_shared<llm::CassetteBackend>(
      cassette, llm::CassetteMode::kRecord,
      std::make_shared<llm::FunctionBackend>(FakeModel(ds), kModel, 1), kModel);
  const auto result = harness::run_experiment(cfg, env);
  cassette->save(cassette_path.string());
  fs::remove_all(scratch);

  core::write_file((out / "golden_results.json").string(),
                   harness::emit_report(result.table, harness::ReportFormat::kJson));
  core::write_file((out / "golden_results.csv").string(),
                   harness::emit_report(result.table, harness::ReportFormat::kCsv));
  core::write_file((out / "golden_results.md").string(),
                   harness::emit_report(result.table, harness::ReportFormat::kMarkdown));
  std::printf("%zu records, %zu cassette entries -> %s\n", result.records.size(),
              cassette->size(), out.string().c_str());
  return 0;
}
