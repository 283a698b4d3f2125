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

#include <fstream>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "rop/core/dataset.h"
#include "rop/core/errors.h"
#include "rop/llm/backend.h"
#include "rop/llm/cassette.h"
#include "rop/harness/config.h"
#include "rop/harness/experiment.h"
#include "rop/harness/records.h"
#include "rop/harness/report.h"
#include "test_util.h"

namespace rop::harness {
namespace {

using perturb::PerturbationType;

// Answers a question correctly only when it arrives unmodified.
std::shared_ptr<llm::FunctionBackend> faithful_model() {
  const auto ds = core::load_dataset(testing::fixture("arith12.jsonl"), core::Split::kTest);
  std::map<std::string, std::string> gold;
  for (const auto& q : ds.questions) gold[q.text] = q.answer.value;
  return std::make_shared<llm::FunctionBackend>(
      [gold](const llm::ChatRequest& req) {
        const auto it = gold.find(req.messages.back().content);
        return llm::text_completion(it == gold.end() ? "The answer is 0."
                                                     : "The answer is " + it->second + ".");
      },
      "mock", 4);
}

ExperimentConfig base_config(const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.datasets = {testing::fixture("arith12.jsonl")};
  cfg.methods = {pipeline::Method::kStand};
  cfg.perturbations = {{}, {PerturbationType::kEC, 1}};
  cfg.output_dir = out_dir;
  cfg.sample_limit = 4;
  return cfg;
}

TEST(Experiment, RecordReplayAndResume) {
  testing::TempDir dir;
  const auto cassette_path = dir.file("tape.jsonl");
  auto model = faithful_model();
  auto cassette = llm::Cassette::load(cassette_path);
  cassette->attach(cassette_path);
  ExperimentEnv env;
  env.backend = std::make_shared<llm::CassetteBackend>(cassette, llm::CassetteMode::kRecord, model);

  const auto cfg = base_config(dir.file("run1"));
  const auto first = run_experiment(cfg, env);
  EXPECT_EQ(first.executed, 8u);
  EXPECT_EQ(first.records.size(), 8u);
  ASSERT_NE(first.table.find("arith12", "Stand", "none", 0), nullptr);
  EXPECT_DOUBLE_EQ(first.table.find("arith12", "Stand", "none", 0)->accuracy, 1.0);
  EXPECT_DOUBLE_EQ(first.table.find("arith12", "Stand", "EC", 1)->accuracy, 0.0);
  for (const auto& r : first.records) {
    EXPECT_EQ(r.status, RecordStatus::kOk);
    if (r.perturbation == "none") {
      EXPECT_EQ(r.perturbed_text, r.original_text);
      EXPECT_TRUE(r.edits.empty());
    } else {
      EXPECT_EQ(r.edits.size(), 1u);
    }
  }
  const auto calls = model->calls();

  // Resume: nothing left to do, so the backend is never touched.
  auto silent = std::make_shared<llm::FunctionBackend>(
      [](const llm::ChatRequest&) -> llm::Completion { throw BackendError("unexpected"); });
  ExperimentEnv resume_env;
  resume_env.backend = silent;
  const auto second = run_experiment(cfg, resume_env);
  EXPECT_EQ(second.executed, 0u);
  EXPECT_EQ(second.resumed, 8u);
  EXPECT_EQ(silent->calls(), 0u);
  EXPECT_EQ(second.table, first.table);
  EXPECT_EQ(model->calls(), calls);

  // Replay into a fresh directory reproduces the table with no inner model.
  ExperimentEnv replay_env;
  replay_env.backend = std::make_shared<llm::CassetteBackend>(
      llm::Cassette::load(cassette_path), llm::CassetteMode::kReplay, nullptr, "mock");
  const auto third = run_experiment(base_config(dir.file("run2")), replay_env);
  EXPECT_EQ(third.table, first.table);
  for (const auto* f : {"results.json", "results.csv", "results.md"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.file("run2") + "/" + f)) << f;
  }
}

TEST(Experiment, BackendErrorsAreRecordedAndRetriedOnResume) {
  testing::TempDir dir;
  ExperimentEnv env;
  env.backend = std::make_shared<llm::FunctionBackend>(
      [](const llm::ChatRequest&) -> llm::Completion { throw BackendError("offline"); });
  auto cfg = base_config(dir.path());
  cfg.perturbations = {{}};
  const auto failed = run_experiment(cfg, env);
  ASSERT_EQ(failed.records.size(), 4u);
  for (const auto& r : failed.records) {
    EXPECT_EQ(r.status, RecordStatus::kError);
    EXPECT_EQ(r.error_class, "backend");
  }
  const auto* row = failed.table.find("arith12", "Stand", "none", 0);
  EXPECT_TRUE(row->incomplete);
  EXPECT_EQ(row->errored, 4u);

  env.backend = faithful_model();
  const auto retried = run_experiment(cfg, env);
  EXPECT_EQ(retried.executed, 4u);
  EXPECT_DOUBLE_EQ(retried.table.find("arith12", "Stand", "none", 0)->accuracy, 1.0);
}

TEST(Experiment, RecordCountMatchesGrid) {
  testing::TempDir dir;
  ExperimentEnv env;
  env.backend = faithful_model();
  pipeline::RopArtifacts arts;
  arts.guidance = ape::Prompt{{"Think."}, {{"1+1?", "2"}}};
  env.artifacts = arts;
  auto cfg = base_config(dir.path());
  cfg.methods = {pipeline::Method::kStand, pipeline::Method::kGuidanceOnly};
  cfg.seeds = {0, 1};
  cfg.perturbations = {{}, {PerturbationType::kSC, 2}, {PerturbationType::kWOO, 1}};
  const auto r = run_experiment(cfg, env);
  std::size_t skipped = 0;
  for (const auto& rec : r.records) skipped += rec.status == RecordStatus::kSkipped;
  EXPECT_EQ(r.records.size(), 4u * 2 * 3 * 2);
  EXPECT_EQ(r.executed, r.records.size());
  (void)skipped;
}

TEST(Sweep, ThreeStrataWithMatchingBudgets) {
  testing::TempDir dir;
  ExperimentEnv env;
  env.backend = faithful_model();
  auto cfg = base_config(dir.path());
  const std::vector<int> levels = {1, 4, 7};
  const auto r = level_sweep(cfg, levels, env);
  std::set<int> strata;
  for (const auto& row : r.table.rows) {
    if (row.perturbation == "EC") strata.insert(row.level);
  }
  EXPECT_EQ(strata, (std::set<int>{1, 4, 7}));
  for (const auto& rec : r.records) {
    if (rec.status == RecordStatus::kOk && rec.perturbation == "EC") {
      EXPECT_EQ(rec.edits.size(), static_cast<std::size_t>(rec.level));
    }
  }
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Sweep, SingleLevelMatchesPlainRun) {
  testing::TempDir dir;
  ExperimentEnv env;
  env.backend = faithful_model();
  const std::vector<int> one = {1};
  const auto swept = level_sweep(base_config(dir.file("a")), one, env);
  const auto plain = run_experiment(base_config(dir.file("b")), env);
  EXPECT_EQ(swept.table, plain.table);
}

TEST(Sweep, DuplicatesWarnAndUicIsRejected) {
  testing::TempDir dir;
  ExperimentEnv env;
  env.backend = faithful_model();
  const std::vector<int> dup = {4, 4};
  const auto r = level_sweep(base_config(dir.path()), dup, env);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("4"), std::string::npos);

  auto cfg = base_config(dir.path());
  cfg.perturbations = {{PerturbationType::kUIC, 0}};
  EXPECT_THROW(level_sweep(cfg, dup, env), ConfigError);
}

ResultRow row(std::string ds, std::string method, std::string pert, int level, double acc) {
  ResultRow r;
  r.dataset = std::move(ds);
  r.method = std::move(method);
  r.perturbation = std::move(pert);
  r.level = level;
  r.n = 1000;
  r.correct = static_cast<std::size_t>(acc * 1000 + 0.5);
  r.accuracy = acc;
  return r;
}

TEST(Report, CsvHeaderAndRow) {
  ResultTable t;
  t.rows = {row("gsm", "Stand", "none", 0, 0.5)};
  const auto csv = emit_report(t, ReportFormat::kCsv);
  EXPECT_EQ(csv,
            "dataset,method,perturbation,level,n,accuracy,ci_low,ci_high\n"
            "gsm,Stand,none,0,1000,0.500000,0.000000,0.000000\n");
  EXPECT_THROW(emit_report(ResultTable{}, ReportFormat::kCsv), ConfigError);
  EXPECT_FALSE(parse_report_format("xml"));
  EXPECT_EQ(parse_report_format("md"), ReportFormat::kMarkdown);
}

TEST(Report, MarkdownBlocks) {
  ResultTable t;
  t.rows = {row("b", "Stand", "none", 0, 0.9), row("a", "Stand", "none", 0, 0.8),
            row("a", "RoP", "UIC", 0, 0.7), row("a", "Stand", "UIC", 0, 0.5),
            row("b", "Stand", "UIC", 0, 0.6)};
  t.sort();
  const auto md = emit_report(t, ReportFormat::kMarkdown);
  EXPECT_TRUE(md.starts_with("| Perturbation | Method | a | b | Avg. |\n"));
  EXPECT_NE(md.find("| No Pert. | Stand | 80.0 | 90.0 | 85.0 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| UIC | Stand | 50.0 | 60.0 | 55.0 |"), std::string::npos) << md;
  EXPECT_LT(md.find("| UIC | Stand"), md.find("|  | RoP"));
  EXPECT_EQ(md, emit_report(t, ReportFormat::kMarkdown));
}

TEST(Report, JsonRoundTrip) {
  ResultTable t;
  t.rows = {row("a", "Stand", "none", 0, 1.0 / 3), row("a", "CoT", "EC", 4, 0.123456789)};
  t.rows[1].incomplete = true;
  t.rows[1].ci_low = 0.1;
  t.sort();
  EXPECT_EQ(table_from_json(nlohmann::json::parse(emit_report(t, ReportFormat::kJson))), t);
}

TEST(Degradation, Examples) {
  ResultTable t;
  t.rows = {row("avg", "Stand", "none", 0, 0.843), row("avg", "Stand", "UIC", 0, 0.589),
            row("avg", "RoP", "UIC", 0, 0.740), row("avg", "CoT", "EC", 1, 0.843)};
  t.sort();
  const auto d = degradation_summary(t);
  ASSERT_EQ(d.size(), 3u);
  std::map<std::string, std::string> drops;
  const auto csv = format_degradation(d);
  EXPECT_NE(csv.find("avg,Stand,UIC,0,84.3,58.9,25.4,Stand"), std::string::npos) << csv;
  EXPECT_NE(csv.find("avg,RoP,UIC,0,84.3,74.0,10.3,Stand"), std::string::npos) << csv;
  EXPECT_NE(csv.find("avg,CoT,EC,1,84.3,84.3,0.0,Stand"), std::string::npos) << csv;

  ResultTable no_clean;
  no_clean.rows = {row("avg", "Stand", "UIC", 0, 0.5)};
  EXPECT_THROW(degradation_summary(no_clean), ConfigError);
}

RunRecord record(std::string method, std::string pert, int level, std::string qid,
                 RecordStatus status, bool correct) {
  RunRecord r;
  r.dataset = "d";
  r.question_id = std::move(qid);
  r.method = std::move(method);
  r.perturbation = std::move(pert);
  r.level = level;
  r.status = status;
  if (status == RecordStatus::kOk) r.correct = correct;
  return r;
}

TEST(Aggregate, MatchesBruteForceRecount) {
  std::mt19937_64 gen(77);
  const std::vector<std::string> methods = {"Stand", "CoT", "RoP"};
  const std::vector<std::pair<std::string, int>> cells = {{"none", 0}, {"EC", 1}, {"UIC", 0}};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RunRecord> recs;
    const auto n = 1 + gen() % 40;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& [pert, level] = cells[gen() % cells.size()];
      const auto status = static_cast<RecordStatus>(gen() % 10 == 0 ? 1 : (gen() % 10 == 0 ? 2 : 0));
      recs.push_back(record(methods[gen() % methods.size()], pert, level,
                            "q" + std::to_string(i), status, gen() % 2));
    }
    const auto table = aggregate(recs);
    std::size_t covered = 0;
    for (const auto& row : table.rows) {
      std::size_t n_eval = 0, hits = 0, errs = 0, skips = 0;
      for (const auto& r : recs) {
        if (r.method != row.method || r.perturbation != row.perturbation || r.level != row.level) {
          continue;
        }
        ++covered;
        if (r.status == RecordStatus::kSkipped) {
          ++skips;
          continue;
        }
        ++n_eval;
        errs += r.status == RecordStatus::kError;
        hits += r.status == RecordStatus::kOk && *r.correct;
      }
      EXPECT_EQ(row.n, n_eval);
      EXPECT_EQ(row.correct, hits);
      EXPECT_EQ(row.errored, errs);
      EXPECT_EQ(row.skipped, skips);
      if (n_eval) EXPECT_DOUBLE_EQ(row.accuracy, static_cast<double>(hits) / n_eval);
      EXPECT_EQ(row.incomplete, n_eval == 0 || errs * 10 > n_eval);
    }
    EXPECT_EQ(covered, recs.size());
  }
}

TEST(Records, RoundTripAndTornLines) {
  testing::TempDir dir;
  const auto path = dir.file("records.jsonl");
  RunRecord r = record("RoP", "EC", 2, "q1", RecordStatus::kOk, true);
  r.edits = {{1, 2, "a", "b", PerturbationType::kEC}};
  r.corrected_text = "fixed";
  r.extracted = "4";
  r.usage = {1, 2, 3};
  {
    RecordLog log(path);
    log.append(record("RoP", "EC", 2, "q1", RecordStatus::kError, false));
    log.append(r);
  }
  std::ofstream(path, std::ios::app) << "{\"dataset\": \"d\", \"quest";
  const auto loaded = load_records(path);
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(to_json(loaded[0]), to_json(r));
  RecordLog reopened(path);
  ASSERT_TRUE(reopened.find(r.key()));
  EXPECT_EQ(reopened.find(r.key())->status, RecordStatus::kOk);
}

TEST(Config, CellsAndValidation) {
  EXPECT_EQ(parse_cell("none"), PerturbationCell{});
  EXPECT_EQ(parse_cell("EC:4"), (PerturbationCell{PerturbationType::kEC, 4}));
  EXPECT_EQ(parse_cell("UIC"), (PerturbationCell{PerturbationType::kUIC, 0}));
  EXPECT_EQ(parse_cell(nlohmann::json{{"type", "HW"}, {"level", 2}}),
            (PerturbationCell{PerturbationType::kHW, 2}));
  EXPECT_THROW(parse_cell("XX"), ConfigError);
  EXPECT_THROW(parse_cell("EC:0"), ConfigError);

  testing::TempDir dir;
  const auto path = dir.file("exp.json");
  std::ofstream(path) << R"({"datasets": ["data.jsonl"], "methods": ["stand", "rop"],
      "perturbations": ["none", "EC:2"], "artifacts": "bundle.json",
      "backend": {"model": "m", "temperature": 0.0}})";
  const auto cfg = load_experiment_config(path);
  EXPECT_EQ(cfg.datasets[0], dir.file("data.jsonl"));
  EXPECT_EQ(cfg.artifacts, dir.file("bundle.json"));
  EXPECT_EQ(cfg.methods.size(), 2u);
  EXPECT_EQ(cfg.perturbations.size(), 2u);

  auto bad = cfg;
  bad.min_word_len = 1;
  EXPECT_THROW(bad.validate(), ConfigError);
}

}  // namespace
}  // namespace rop::harness
