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

#include "rop/harness/experiment.h"

#include <chrono>
#include <filesystem>
#include <set>

#include "rop/core/dataset.h"
#include "rop/core/errors.h"
#include "rop/core/parallel.h"
#include "rop/core/text.h"
#include "rop/llm/cassette.h"
#include "rop/llm/config.h"
#include "rop/llm/fingerprint.h"
#include "rop/llm/http_backend.h"
#include "rop/perturb/adversarial.h"
#include "rop/perturb/perturb.h"

namespace rop::harness {

namespace {

std::string error_class(const std::exception& e) {
  if (dynamic_cast<const llm::ReplayMissError*>(&e)) return "replay_miss";
  if (dynamic_cast<const llm::RetryExhaustedError*>(&e)) return "retry_exhausted";
  if (dynamic_cast<const llm::HttpStatusError*>(&e)) return "http_status";
  if (dynamic_cast<const llm::TransportError*>(&e)) return "transport";
  if (dynamic_cast<const BackendError*>(&e)) return "backend";
  if (dynamic_cast<const PerturbationError*>(&e)) return "perturbation";
  return "internal";
}

struct Perturbed {
  std::string text;
  std::vector<perturb::Edit> edits;
  std::optional<std::string> skip_reason;
  std::optional<std::string> error_class;
  std::string error_message;
};

struct Context {
  const ExperimentConfig& cfg;
  const perturb::PerturbTables& tables;
  const pipeline::RopArtifacts& artifacts;
  llm::ChatBackend& backend;
  llm::ChatBackend* perturbation_backend;
};

Perturbed perturb_question(const Context& ctx, const core::Question& q,
                           const PerturbationCell& cell, std::uint64_t seed) {
  Perturbed out;
  if (!cell.type) {
    out.text = q.text;
    return out;
  }
  perturb::PerturbationConfig pcfg;
  pcfg.level = std::max(cell.level, 1);
  pcfg.seed = perturb::question_seed(seed, q.id, *cell.type, cell.level);
  pcfg.protect_numbers = ctx.cfg.protect_numbers;
  pcfg.min_word_len = ctx.cfg.min_word_len;
  pcfg.ec_mode = ctx.cfg.ec_mode;
  perturb::PerturbOptions opts;
  opts.via_llm = ctx.cfg.perturb_via_llm;
  try {
    auto pq = perturb::perturb(q, *cell.type, pcfg, ctx.tables,
                               ctx.perturbation_backend, opts);
    out.text = std::move(pq.perturbed_text);
    out.edits = std::move(pq.edits);
  } catch (const PerturbationError& e) {
    out.text = q.text;
    out.skip_reason = e.what();
  } catch (const BackendError& e) {
    out.text = q.text;
    out.error_class = error_class(e);
    out.error_message = e.what();
  }
  return out;
}

RunRecord base_record(const std::string& dataset, const core::Question& q,
                      pipeline::Method method, const PerturbationCell& cell,
                      std::uint64_t seed) {
  RunRecord r;
  r.dataset = dataset;
  r.question_id = q.id;
  r.method = std::string(pipeline::label(method));
  r.perturbation = cell_name(cell);
  r.level = cell.level;
  r.seed = seed;
  r.original_text = q.text;
  r.gold = q.answer.value;
  return r;
}

RunRecord run_one(const Context& ctx, RunRecord r, const core::Question& q,
                  pipeline::Method method, const Perturbed& p) {
  r.perturbed_text = p.text;
  r.edits = p.edits;
  if (p.skip_reason) {
    r.status = RecordStatus::kSkipped;
    r.error_class = "ineligible";
    r.error_message = *p.skip_reason;
    return r;
  }
  if (p.error_class) {
    r.status = RecordStatus::kError;
    r.error_class = *p.error_class;
    r.error_message = p.error_message;
    return r;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    auto result = pipeline::run_method(q, p.text, method, ctx.artifacts, ctx.backend,
                                       ctx.cfg.pipeline);
    r.status = RecordStatus::kOk;
    if (result.correction) {
      r.corrected_text = result.correction->corrected_text;
      r.correction_fallback = result.correction->fallback;
    }
    r.raw_completion = result.prediction.raw_completion;
    r.extracted = result.prediction.extracted;
    r.correct = result.prediction.correct.value_or(false);
    r.request_fingerprint =
        llm::fingerprint(llm::resolve_model(result.request, ctx.backend));
    r.usage = result.usage;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.status = RecordStatus::kError;
    r.error_class = error_class(e);
    r.error_message = e.what();
  }
  r.latency_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

}  // namespace

std::string records_path(const ExperimentConfig& cfg) {
  return (std::filesystem::path(cfg.output_dir) / "records.jsonl").string();
}

void write_reports(const ResultTable& table, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (auto f : {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kMarkdown}) {
    const auto path = std::filesystem::path(dir) / ("results." + std::string(extension(f)));
    core::write_file(path.string(), emit_report(table, f));
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentEnv& env) {
  cfg.validate();
  for (const auto& path : cfg.datasets) {
    if (!std::filesystem::exists(path)) {
      throw ConfigError("dataset '" + path + "' does not exist");
    }
  }

  const perturb::PerturbTables tables =
      env.tables ? *env.tables
                 : perturb::load_tables(cfg.data_dir.empty() ? perturb::default_data_dir()
                                                             : cfg.data_dir);
  pipeline::RopArtifacts artifacts;
  if (env.artifacts) {
    artifacts = *env.artifacts;
  } else if (!cfg.artifacts.empty()) {
    artifacts = pipeline::load_bundle(cfg.artifacts).prompts();
  }
  const bool wants_cot = std::find(cfg.methods.begin(), cfg.methods.end(),
                                   pipeline::Method::kCoT) != cfg.methods.end();
  if (wants_cot && !artifacts.cot) {
    artifacts.cot = pipeline::load_cot_prompt(
        cfg.cot_exemplars.empty() ? pipeline::default_cot_path() : cfg.cot_exemplars);
  }
  for (auto m : cfg.methods) pipeline::check_artifacts(m, artifacts);

  std::shared_ptr<llm::ChatBackend> backend =
      env.backend ? env.backend : llm::make_backend(cfg.backend);
  std::shared_ptr<llm::ChatBackend> pert_backend = env.perturbation_backend;
  if (!pert_backend && cfg.perturbation_backend) {
    pert_backend = llm::make_backend(*cfg.perturbation_backend);
  }

  RecordLog log(records_path(cfg));
  const Context ctx{cfg, tables, artifacts, *backend, pert_backend.get()};
  ExperimentResult result;
  std::vector<std::string> keys;
  std::mutex count_mu;

  for (const auto& path : cfg.datasets) {
    core::Dataset ds = core::load_dataset(path, core::Split::kTest);
    if (cfg.sample_limit && ds.questions.size() > *cfg.sample_limit) {
      ds.questions.resize(*cfg.sample_limit);
    }
    for (std::uint64_t seed : cfg.seeds) {
      for (const auto& cell : cfg.perturbations) {
        core::parallel_for(ds.questions.size(), backend->parallelism(), [&](std::size_t i) {
          const core::Question& q = ds.questions[i];
          std::optional<Perturbed> perturbed;
          for (auto method : cfg.methods) {
            RunRecord r = base_record(ds.name, q, method, cell, seed);
            if (auto prior = log.find(r.key());
                prior && prior->status != RecordStatus::kError) {
              std::lock_guard lock(count_mu);
              ++result.resumed;
              continue;
            }
            if (!perturbed) perturbed = perturb_question(ctx, q, cell, seed);
            log.append(run_one(ctx, std::move(r), q, method, *perturbed));
            std::lock_guard lock(count_mu);
            ++result.executed;
          }
        });
        for (const auto& q : ds.questions) {
          for (auto method : cfg.methods) {
            keys.push_back(base_record(ds.name, q, method, cell, seed).key());
          }
        }
      }
    }
  }

  for (const auto& k : keys) {
    if (auto r = log.find(k)) result.records.push_back(std::move(*r));
  }
  result.table = aggregate(result.records);
  if (!result.table.rows.empty()) write_reports(result.table, cfg.output_dir);
  return result;
}

ExperimentResult level_sweep(const ExperimentConfig& cfg, std::span<const int> levels,
                             const ExperimentEnv& env) {
  if (levels.empty()) throw ConfigError("level sweep needs at least one level");
  std::vector<int> unique;
  std::vector<std::string> warnings;
  for (int level : levels) {
    if (level < 1) throw ConfigError("sweep levels must be >= 1");
    if (std::find(unique.begin(), unique.end(), level) != unique.end()) {
      warnings.push_back("duplicate sweep level " + std::to_string(level) + " ignored");
      continue;
    }
    unique.push_back(level);
  }
  ExperimentConfig swept = cfg;
  swept.perturbations.clear();
  std::vector<perturb::PerturbationType> types;
  bool clean = false;
  for (const auto& cell : cfg.perturbations) {
    if (!cell.type) {
      clean = true;
      continue;
    }
    if (*cell.type == perturb::PerturbationType::kUIC) {
      throw ConfigError("UIC has no perturbation level and cannot be swept");
    }
    if (std::find(types.begin(), types.end(), *cell.type) == types.end()) {
      types.push_back(*cell.type);
    }
  }
  if (types.empty()) throw ConfigError("level sweep needs at least one leveled perturbation type");
  if (clean) swept.perturbations.push_back({});
  for (auto type : types) {
    for (int level : unique) swept.perturbations.push_back({type, level});
  }
  ExperimentResult result = run_experiment(swept, env);
  result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());
  return result;
}

}  // namespace rop::harness
