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

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "acceptance/criteria.h"
#include "rop/ape/search.h"
#include "rop/core/dataset.h"
#include "rop/core/text.h"
#include "rop/core/utf8.h"
#include "rop/harness/config.h"
#include "rop/harness/experiment.h"
#include "rop/harness/records.h"
#include "rop/harness/report.h"
#include "rop/llm/backend.h"
#include "rop/llm/cassette.h"
#include "rop/llm/config.h"
#include "rop/perturb/perturb.h"
#include "rop/perturb/tables.h"
#include "test_util.h"

namespace rop::acceptance {
namespace {

using perturb::PerturbationType;

class Budget {
 public:
  explicit Budget(const char* id) : criterion_(find_criterion(id)) {}
  ~Budget() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (criterion_->budget_s > 0) {
      EXPECT_LT(s, criterion_->budget_s) << criterion_->id << " exceeded its runtime budget";
    }
  }

 private:
  const Criterion* criterion_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const perturb::PerturbTables& tables() {
  static const perturb::PerturbTables t = perturb::load_tables();
  return t;
}

// ---------------------------------------------------------------------------
// AC1

TEST(AC1_ReferenceOnly, PublishedFiguresAreFixtureData) {
  const auto table = harness::table_from_json(
      nlohmann::json::parse(core::read_file(testing::fixture("reference_accuracy.json"))));
  const auto* clean = table.find("Avg.", "Stand", "none", 0);
  const auto* stand = table.find("Avg.", "Stand", "UIC", 0);
  const auto* rop = table.find("Avg.", "RoP", "UIC", 0);
  ASSERT_TRUE(clean && stand && rop);
  EXPECT_DOUBLE_EQ(clean->accuracy, 0.843);
  EXPECT_DOUBLE_EQ(stand->accuracy, 0.589);
  EXPECT_DOUBLE_EQ(rop->accuracy, 0.740);
  // Reference rows carry no evaluated questions: they are never produced by
  // this toolkit, only compared against.
  for (const auto& row : table.rows) EXPECT_EQ(row.n, 0u);
}

// ---------------------------------------------------------------------------
// AC2

std::string random_text(std::mt19937_64& gen) {
  static const std::vector<std::string> vocab = {
      "will", "times", "be", "the", "apples", "Natalia", "sold", "buy", "there", "hour",
      "right", "older", "friends", "miles", "wait", "Each", "Road", "sea", "new", "piece",
      "tīmê", "café", "bee", "know", "write", "flour", "whole", "weigh", "pair", "sun",
      "3", "48", "12.5", "1,200", "7", "2024", "0.75"};
  static const std::vector<std::string> seps = {" ", " ", " ", ", ", ". ", " - ", "  ", "; "};
  std::string s;
  const auto n = 3 + gen() % 20;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += seps[gen() % seps.size()];
    s += vocab[gen() % vocab.size()];
  }
  if (gen() % 2) s += "?";
  return s;
}

bool is_digit_at(const std::string& s, std::size_t i) {
  return i < s.size() && s[i] >= '0' && s[i] <= '9';
}

// Letters, digits and non-ASCII bytes form words; '.' or ',' between two
// digits stays inside a number.
bool unit_at(const std::string& s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (std::isalnum(c) || c >= 0x80) return true;
  return (c == '.' || c == ',') && i > 0 && is_digit_at(s, i - 1) && is_digit_at(s, i + 1);
}

// Maximal word/number runs and the remaining separator skeleton. Written
// independently of the library tokenizer.
std::multiset<std::string> units(const std::string& s) {
  std::multiset<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (unit_at(s, i)) {
      cur.push_back(s[i]);
    } else if (!cur.empty()) {
      out.insert(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.insert(cur);
  return out;
}

std::string skeleton(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!unit_at(s, i)) out.push_back(s[i]);
  }
  return out;
}

std::vector<std::string> digit_runs(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Independent edit application: splice by code point offsets, right to left.
std::string splice(const std::string& original, std::vector<perturb::Edit> edits) {
  std::u32string text = core::utf8::decode(original);
  std::sort(edits.begin(), edits.end(),
            [](const auto& a, const auto& b) { return a.start > b.start; });
  for (const auto& e : edits) {
    text = text.substr(0, e.start) + core::utf8::decode(e.after) + text.substr(e.end);
  }
  return core::utf8::encode(text);
}

TEST(AC2_PerturbationInvariants, RandomizedCasesPerType) {
  Budget budget("AC2");
  constexpr int kCasesPerType = 1000;
  std::mt19937_64 gen(20240601);
  for (auto type : perturb::kAllPerturbationTypes) {
    int produced = 0;
    int attempts = 0;
    while (produced < kCasesPerType) {
      ASSERT_LT(++attempts, kCasesPerType * 4) << "too many ineligible inputs for "
                                               << perturb::to_string(type);
      const core::Question q{"r", random_text(gen), {core::AnswerKind::kNumeric, "1"}, {}};
      perturb::PerturbationConfig cfg;
      cfg.level = 1 + static_cast<int>(gen() % 5);
      cfg.seed = gen();
      cfg.ec_mode = static_cast<perturb::EcMode>(gen() % 3);
      perturb::PerturbedQuestion pq;
      try {
        pq = perturb::perturb(q, type, cfg, tables());
      } catch (const PerturbationError&) {
        continue;
      }
      ++produced;
      const std::string& out = pq.perturbed_text;
      SCOPED_TRACE(q.text + "  =>  " + out);

      // Reconstruction from edits.
      ASSERT_EQ(splice(q.text, pq.edits), out);
      // Exact budget.
      if (type == PerturbationType::kUIC) {
        ASSERT_EQ(pq.edits.size(), 1u);
        ASSERT_TRUE(out.starts_with(q.text));
      } else {
        ASSERT_EQ(pq.edits.size(), static_cast<std::size_t>(cfg.level));
      }
      // Determinism across runs.
      ASSERT_EQ(pq, perturb::perturb(q, type, cfg, tables()));
      // Number protection: digit runs untouched (WOO may only move them).
      if (type == PerturbationType::kWOO) {
        auto a = digit_runs(q.text), b = digit_runs(out);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        ASSERT_EQ(a, b);
      } else if (type != PerturbationType::kUIC) {
        ASSERT_EQ(digit_runs(q.text), digit_runs(out));
      }
      switch (type) {
        case PerturbationType::kWOO:
          ASSERT_EQ(units(q.text), units(out));
          ASSERT_EQ(skeleton(q.text), skeleton(out));
          break;
        case PerturbationType::kSC:
          for (const auto& e : pq.edits) {
            const auto b = core::utf8::decode(e.before), a = core::utf8::decode(e.after);
            ASSERT_EQ(b.size(), 1u);
            ASSERT_EQ(a.size(), 1u);
            ASSERT_TRUE(tables().confusables.contains(b[0], a[0]));
          }
          break;
        case PerturbationType::kHW:
          for (const auto& e : pq.edits) {
            ASSERT_TRUE(tables().homophones.contains(core::to_lower_ascii(e.before),
                                                     core::to_lower_ascii(e.after)))
                << e.before << " -> " << e.after;
          }
          break;
        case PerturbationType::kEC:
          ASSERT_EQ(core::utf8::length(out), core::utf8::length(q.text));
          break;
        case PerturbationType::kUIC:
          break;
      }
    }
    EXPECT_EQ(produced, kCasesPerType);
  }
}

// ---------------------------------------------------------------------------
// AC3

bool reachable(const std::string& input, const std::string& target, PerturbationType type,
               int level, perturb::EcMode mode = perturb::EcMode::kMixed) {
  std::set<std::string> outputs;
  for (std::uint64_t seed = 0; seed <= 10000; ++seed) {
    perturb::PerturbationConfig cfg;
    cfg.level = level;
    cfg.seed = seed;
    cfg.ec_mode = mode;
    const core::Question q{"x", input, {core::AnswerKind::kNumeric, "1"}, {}};
    try {
      outputs.insert(perturb::perturb(q, type, cfg, tables()).perturbed_text);
    } catch (const PerturbationError&) {
    }
  }
  return outputs.count(target) > 0;
}

TEST(AC3_ExemplarReachability, ErrorCharacter) {
  Budget budget("AC3");
  EXPECT_TRUE(reachable("times", "tmies", PerturbationType::kEC, 2));
  EXPECT_TRUE(reachable("will", "wlil", PerturbationType::kEC, 2));
  // Control: four changed characters are not a level-2 output.
  EXPECT_FALSE(reachable("times", "tmise", PerturbationType::kEC, 2));
}

TEST(AC3_ExemplarReachability, SimilarCharacter) {
  EXPECT_TRUE(reachable("will", "wiļļ", PerturbationType::kSC, 2));
  EXPECT_TRUE(reachable("times", "tīmês", PerturbationType::kSC, 2));
}

TEST(AC3_ExemplarReachability, WordOrderAndHomophone) {
  EXPECT_TRUE(reachable("3 times", "times 3", PerturbationType::kWOO, 1));
  EXPECT_TRUE(reachable("be", "bee", PerturbationType::kHW, 1));
}

// ---------------------------------------------------------------------------
// AC4

ape::InstructionTask synthetic_task() {
  ape::InstructionTask task;
  for (int i = 0; i < 3; ++i) {
    task.demos.push_back({"d" + std::to_string(i), "in d" + std::to_string(i),
                          "out d" + std::to_string(i), std::nullopt, {}});
  }
  for (int i = 0; i < 8; ++i) {
    task.eval_set.push_back({"e" + std::to_string(i), "in e" + std::to_string(i),
                             "out e" + std::to_string(i), std::nullopt, {}});
  }
  return task;
}

// Candidate c answers eval item i correctly iff rule(c, i).
using Rule = std::function<bool(int, int)>;

std::shared_ptr<llm::FunctionBackend> scripted_backend(Rule rule) {
  return std::make_shared<llm::FunctionBackend>(
      [rule](const llm::ChatRequest& req) {
        if (req.temperature > 0) return llm::text_completion("unused");
        const int c = std::stoi(req.messages.front().content.substr(std::string("cand ").size()));
        const std::string input = req.messages.back().content;
        const int i = std::stoi(input.substr(std::string("in e").size()));
        const std::string out = "out e" + std::to_string(i);
        return llm::text_completion(rule(c, i) ? out : "nope");
      },
      "mock", 4);
}

std::vector<ape::Instruction> candidates(int n) {
  std::vector<ape::Instruction> out;
  for (int c = 0; c < n; ++c) out.push_back({"cand " + std::to_string(c)});
  return out;
}

TEST(AC4_InstructionSearch, ScriptedWinnerAndBruteForceScores) {
  Budget budget("AC4");
  const Rule rule = [](int c, int i) {
    if (c == 2) return true;
    return (i + c) % 4 < 2 && i % (c + 2) != 0;  // at most half
  };
  auto task = synthetic_task();
  auto backend = scripted_backend(rule);
  auto cands = candidates(6);
  ape::score_candidates(cands, task, *backend);
  for (int c = 0; c < 6; ++c) {
    int hits = 0;
    for (int i = 0; i < 8; ++i) hits += rule(c, i);
    EXPECT_DOUBLE_EQ(*cands[c].score, hits / 8.0) << c;
    if (c != 2) EXPECT_LE(*cands[c].score, 0.5);
  }
  EXPECT_EQ(ape::select_best_index(cands), 2u);
  EXPECT_EQ(ape::select_best(cands).text, "cand 2");
}

TEST(AC4_InstructionSearch, TiesReturnLowestIndex) {
  const Rule rule = [](int c, int i) { return c == 1 || c == 3 ? i < 6 : i < 2; };
  auto task = synthetic_task();
  auto backend = scripted_backend(rule);
  auto cands = candidates(5);
  ape::score_candidates(cands, task, *backend);
  EXPECT_DOUBLE_EQ(*cands[1].score, *cands[3].score);
  EXPECT_EQ(ape::select_best_index(cands), 1u);
}

// ---------------------------------------------------------------------------
// AC5

std::optional<long long> last_integer(const std::string& text) {
  std::optional<long long> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out = std::stoll(cur);
    cur.clear();
  };
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      cur.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

TEST(AC5_EndToEndReplay, GoldenTableAndRecount) {
  Budget budget("AC5");
  const std::string dir = testing::fixture("replay");
  auto cfg = harness::load_experiment_config(dir + "/config.json");
  ASSERT_TRUE(cfg.backend.cassette);
  ASSERT_EQ(cfg.backend.cassette->mode, llm::CassetteMode::kReplay);
  ASSERT_EQ(cfg.methods.size(), 5u);
  testing::TempDir out;
  cfg.output_dir = out.path();

  const auto result = harness::run_experiment(cfg);
  EXPECT_EQ(result.records.size(), 12u * 5 * 2);
  for (const auto& r : result.records) {
    ASSERT_EQ(r.status, harness::RecordStatus::kOk) << r.key() << " " << r.error_message;
  }
  EXPECT_EQ(harness::emit_report(result.table, harness::ReportFormat::kJson),
            core::read_file(dir + "/golden_results.json"));
  EXPECT_EQ(harness::emit_report(result.table, harness::ReportFormat::kCsv),
            core::read_file(dir + "/golden_results.csv"));
  EXPECT_EQ(core::read_file(out.file("results.json")),
            core::read_file(dir + "/golden_results.json"));

  // Recount straight from the cassette completions.
  std::map<std::string, nlohmann::json> tape;
  for (const auto& line : core::split(core::read_file(cfg.backend.cassette->path), '\n')) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    tape[j["fingerprint"].get<std::string>()] = j["response"];
  }
  std::map<std::tuple<std::string, std::string, int>, std::pair<int, int>> counts;
  for (const auto& r : result.records) {
    ASSERT_TRUE(tape.count(r.request_fingerprint)) << r.key();
    const auto text = tape[r.request_fingerprint]["text"].get<std::string>();
    auto& [hits, n] = counts[{r.method, r.perturbation, r.level}];
    ++n;
    hits += last_integer(text) == std::stoll(r.gold);
  }
  ASSERT_EQ(counts.size(), result.table.rows.size());
  for (const auto& row : result.table.rows) {
    const auto [hits, n] = counts.at({row.method, row.perturbation, row.level});
    EXPECT_EQ(row.n, static_cast<std::size_t>(n));
    EXPECT_EQ(row.correct, static_cast<std::size_t>(hits)) << row.method << " " << row.perturbation;
    EXPECT_DOUBLE_EQ(row.accuracy, static_cast<double>(hits) / n);
  }
}

// ---------------------------------------------------------------------------
// AC6

TEST(AC6_LevelSweep, ThreeStrataWithExactBudgets) {
  Budget budget("AC6");
  testing::TempDir out;
  harness::ExperimentConfig cfg;
  cfg.datasets = {testing::fixture("arith12.jsonl")};
  cfg.methods = {pipeline::Method::kStand};
  cfg.perturbations = {{PerturbationType::kEC, 1}};
  cfg.output_dir = out.path();
  harness::ExperimentEnv env;
  env.backend = std::make_shared<llm::FunctionBackend>(
      [](const llm::ChatRequest&) { return llm::text_completion("The answer is 1."); }, "mock",
      4);
  const std::vector<int> levels = {1, 4, 7};
  const auto result = harness::level_sweep(cfg, levels, env);

  std::set<std::pair<std::string, int>> strata;
  for (const auto& row : result.table.rows) strata.insert({row.perturbation, row.level});
  EXPECT_EQ(strata, (std::set<std::pair<std::string, int>>{{"EC", 1}, {"EC", 4}, {"EC", 7}}));
  EXPECT_EQ(result.records.size(), 12u * 3);
  for (const auto& r : result.records) {
    ASSERT_EQ(r.status, harness::RecordStatus::kOk) << r.key();
    EXPECT_EQ(r.edits.size(), static_cast<std::size_t>(r.level)) << r.key();
    const auto a = core::utf8::decode(r.original_text);
    const auto b = core::utf8::decode(r.perturbed_text);
    ASSERT_EQ(a.size(), b.size());
    int changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i];
    EXPECT_EQ(changed, r.level) << r.key();
  }
}

// ---------------------------------------------------------------------------
// AC7

TEST(AC7_LiveDirectional, RopNotWorseThanStandUnderUic) {
  const char* backend_path = std::getenv("ROP_LIVE_BACKEND");
  const char* dataset = std::getenv("ROP_LIVE_DATASET");
  const char* artifacts = std::getenv("ROP_LIVE_ARTIFACTS");
  if (!backend_path || !dataset || !artifacts) {
    GTEST_SKIP() << "set ROP_LIVE_BACKEND, ROP_LIVE_DATASET and ROP_LIVE_ARTIFACTS to run";
  }
  testing::TempDir out;
  harness::ExperimentConfig cfg;
  cfg.datasets = {dataset};
  cfg.methods = {pipeline::Method::kStand, pipeline::Method::kRoP};
  cfg.perturbations = {{PerturbationType::kUIC, 0}};
  cfg.sample_limit = 50;
  cfg.artifacts = artifacts;
  cfg.backend = llm::load_backend_config(backend_path);
  cfg.perturbation_backend = cfg.backend;
  cfg.output_dir = out.path();
  const auto result = harness::run_experiment(cfg);
  const auto name = std::filesystem::path(dataset).stem().string();
  const auto* stand = result.table.find(name, "Stand", "UIC", 0);
  const auto* rop = result.table.find(name, "RoP", "UIC", 0);
  ASSERT_TRUE(stand && rop);
  std::printf("live: Stand %.3f, RoP %.3f (n=%zu)\n", stand->accuracy, rop->accuracy, rop->n);
  EXPECT_GE(rop->accuracy, stand->accuracy);
}

// ---------------------------------------------------------------------------
// AC8

TEST(AC8_Aggregation, RandomRecordSetsMatchRecount) {
  Budget budget("AC8");
  std::mt19937_64 gen(8);
  const std::vector<std::string> methods = {"Stand", "CoT", "GO", "CO", "RoP"};
  const std::vector<std::string> datasets = {"a", "b"};
  for (int set = 0; set < 20; ++set) {
    std::vector<harness::RunRecord> recs;
    const auto n = 20 + gen() % 200;
    for (std::size_t i = 0; i < n; ++i) {
      harness::RunRecord r;
      r.dataset = datasets[gen() % 2];
      r.method = methods[gen() % methods.size()];
      r.perturbation = gen() % 2 ? "none" : "EC";
      r.level = r.perturbation == "none" ? 0 : 1 + static_cast<int>(gen() % 3);
      r.question_id = "q" + std::to_string(i);
      r.correct = gen() % 2 == 0;
      recs.push_back(r);
    }
    const auto table = harness::aggregate(recs);
    std::map<std::tuple<std::string, std::string, std::string, int>, std::pair<int, int>> brute;
    for (const auto& r : recs) {
      auto& [hits, total] = brute[{r.dataset, r.method, r.perturbation, r.level}];
      ++total;
      hits += *r.correct;
    }
    ASSERT_EQ(table.rows.size(), brute.size());
    for (const auto& row : table.rows) {
      const auto [hits, total] = brute.at({row.dataset, row.method, row.perturbation, row.level});
      EXPECT_EQ(row.n, static_cast<std::size_t>(total));
      EXPECT_DOUBLE_EQ(row.accuracy, static_cast<double>(hits) / total);
    }
  }
}

TEST(AC8_Aggregation, ReferenceDegradationDeltas) {
  const auto table = harness::table_from_json(
      nlohmann::json::parse(core::read_file(testing::fixture("reference_accuracy.json"))));
  const auto rows = harness::degradation_summary(table);
  const auto csv = harness::format_degradation(rows);
  EXPECT_NE(csv.find("Avg.,Stand,UIC,0,84.3,58.9,25.4,Stand\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("Avg.,RoP,UIC,0,84.3,74.0,10.3,Stand\n"), std::string::npos) << csv;
}

}  // namespace
}  // namespace rop::acceptance
