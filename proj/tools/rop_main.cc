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

// Command-line front end for the toolkit.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rop/ape/artifact.h"
#include "rop/ape/search.h"
#include "rop/ape/task.h"
#include "rop/core/dataset.h"
#include "rop/core/errors.h"
#include "rop/core/metrics.h"
#include "rop/core/parallel.h"
#include "rop/core/text.h"
#include "rop/harness/experiment.h"
#include "rop/harness/records.h"
#include "rop/harness/report.h"
#include "rop/llm/config.h"
#include "rop/perturb/adversarial.h"
#include "rop/perturb/perturb.h"
#include "rop/perturb/tables.h"
#include "rop/pipeline/artifacts.h"
#include "rop/pipeline/pipeline.h"

namespace {

using namespace rop;

std::vector<perturb::PerturbationType> parse_types(const std::string& list) {
  std::vector<perturb::PerturbationType> out;
  for (const auto& part : core::split(list, ',')) {
    const std::string name = core::trim(part);
    if (name.empty()) continue;
    auto t = perturb::parse_perturbation_type(name);
    if (!t) throw ConfigError("unknown perturbation type '" + name + "'");
    out.push_back(*t);
  }
  if (out.empty()) throw ConfigError("no perturbation types given");
  return out;
}

std::vector<int> parse_levels(const std::string& list) {
  std::vector<int> out;
  for (const auto& part : core::split(list, ',')) {
    const std::string v = core::trim(part);
    if (v.empty()) continue;
    try {
      out.push_back(std::stoi(v));
    } catch (const std::exception&) {
      throw ConfigError("bad level '" + v + "'");
    }
  }
  return out;
}

std::shared_ptr<llm::ChatBackend> backend_from(const std::string& path) {
  if (path.empty()) return nullptr;
  return llm::make_backend(llm::load_backend_config(path));
}

llm::BackendConfig config_from(const std::string& path) {
  return path.empty() ? llm::BackendConfig{} : llm::load_backend_config(path);
}

void write_adversarial_records(const std::vector<perturb::AdversarialPair>& pairs,
                               const std::string& out) {
  std::string body;
  for (const auto& p : pairs) body += perturb::pair_to_json(p).dump() + "\n";
  core::write_file(out, body);
}

// Accepts either a bundle or a single correction artifact.
ape::Prompt correction_prompt_from(const std::string& path) {
  auto j = nlohmann::json::parse(core::read_file(path));
  if (j.contains("mode")) {
    auto a = ape::artifact_from_json(j);
    if (a.mode != ape::TaskMode::kCorrection) {
      throw ConfigError("'" + path + "' is not a correction artifact");
    }
    return a.prompt();
  }
  auto prompts = pipeline::bundle_from_json(j).prompts();
  if (!prompts.correction) throw ConfigError("'" + path + "' has no correction artifact");
  return *prompts.correction;
}

void print_table(const harness::ExperimentResult& result, const std::string& out_dir) {
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << result.executed << " record(s) run, " << result.resumed
            << " resumed; reports in " << out_dir << "\n";
  if (!result.table.rows.empty()) {
    std::cout << harness::emit_report(result.table, harness::ReportFormat::kMarkdown);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust prompting toolkit: perturb, search instructions, evaluate."};
  app.require_subcommand(1);
  std::string data_dir;
  app.add_option("--data-dir", data_dir, "Directory with confusables, homophones and prompts");

  // perturb
  auto* perturb_cmd = app.add_subcommand("perturb", "Perturb every question of a dataset");
  std::string p_dataset, p_type, p_out, p_backend, p_ec_mode = "mixed";
  int p_level = 1, p_min_len = 3;
  std::uint64_t p_seed = 0;
  bool p_via_llm = false, p_keep_numbers = false;
  perturb_cmd->add_option("--dataset", p_dataset)->required();
  perturb_cmd->add_option("--type", p_type, "ec|sc|woo|hw|uic")->required();
  perturb_cmd->add_option("--level", p_level);
  perturb_cmd->add_option("--seed", p_seed);
  perturb_cmd->add_option("--out", p_out)->required();
  perturb_cmd->add_flag("--via-llm", p_via_llm, "Ask the backend, validate, fall back");
  perturb_cmd->add_option("--backend", p_backend, "Backend config (UIC / --via-llm)");
  perturb_cmd->add_option("--ec-mode", p_ec_mode, "shuffle|substitute|mixed");
  perturb_cmd->add_option("--min-word-len", p_min_len);
  perturb_cmd->add_flag("--no-protect-numbers", p_keep_numbers);

  // gen-adv
  auto* adv_cmd = app.add_subcommand("gen-adv", "Build an adversarial training set");
  std::string a_train, a_types = "ec,sc,woo,hw,uic", a_out, a_backend;
  std::size_t a_k = 16;
  int a_level = 1;
  std::uint64_t a_seed = 0;
  adv_cmd->add_option("--train", a_train)->required();
  adv_cmd->add_option("--k", a_k);
  adv_cmd->add_option("--types", a_types);
  adv_cmd->add_option("--level", a_level);
  adv_cmd->add_option("--seed", a_seed);
  adv_cmd->add_option("--out", a_out)->required();
  adv_cmd->add_option("--backend", a_backend);

  // gen-instr
  auto* instr_cmd = app.add_subcommand("gen-instr", "Propose, score and select an instruction");
  std::string i_mode, i_demos, i_out, i_backend, i_scorer = "exact", i_meta;
  std::size_t i_candidates = 8, i_m = 16, i_k_guid = 8;
  double i_eval_frac = 0.5, i_f1 = 0.9;
  std::uint64_t i_seed = 0;
  instr_cmd->add_option("--mode", i_mode, "correction|guidance")->required();
  instr_cmd->add_option("--demos", i_demos,
                        "Adversarial JSONL (correction) or corrected dataset JSONL (guidance)")
      ->required();
  instr_cmd->add_option("--candidates", i_candidates);
  instr_cmd->add_option("--eval-frac", i_eval_frac);
  instr_cmd->add_option("--seed", i_seed);
  instr_cmd->add_option("--out", i_out)->required();
  instr_cmd->add_option("--backend", i_backend)->required();
  instr_cmd->add_option("--m", i_m, "Adversarial pairs drawn for the correction task");
  instr_cmd->add_option("--k-guid", i_k_guid, "Maximum guidance demos");
  instr_cmd->add_option("--scorer", i_scorer, "exact|f1|downstream (correction mode)");
  instr_cmd->add_option("--f1-threshold", i_f1);
  instr_cmd->add_option("--meta-prompt", i_meta, "Override the proposal meta-prompt file");

  // correct
  auto* correct_cmd = app.add_subcommand("correct", "Correct adversarial questions into a dataset");
  std::string c_adv, c_artifacts, c_backend, c_out;
  correct_cmd->add_option("--adv", c_adv, "Adversarial JSONL")->required();
  correct_cmd->add_option("--artifacts", c_artifacts, "Bundle or correction artifact")->required();
  correct_cmd->add_option("--backend", c_backend)->required();
  correct_cmd->add_option("--out", c_out)->required();

  // bundle
  auto* bundle_cmd = app.add_subcommand("bundle", "Combine correction and guidance artifacts");
  std::string b_correction, b_guidance, b_out;
  bundle_cmd->add_option("--correction", b_correction);
  bundle_cmd->add_option("--guidance", b_guidance);
  bundle_cmd->add_option("--out", b_out)->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate one method on one dataset");
  std::string e_dataset, e_method, e_artifacts, e_backend, e_out, e_pert = "none";
  std::uint64_t e_seed = 0;
  eval_cmd->add_option("--dataset", e_dataset)->required();
  eval_cmd->add_option("--method", e_method, "stand|cot|go|co|rop")->required();
  eval_cmd->add_option("--artifacts", e_artifacts);
  eval_cmd->add_option("--backend", e_backend)->required();
  eval_cmd->add_option("--out", e_out, "Output directory")->required();
  eval_cmd->add_option("--perturbation", e_pert, "none, UIC or TYPE:LEVEL");
  eval_cmd->add_option("--seed", e_seed);

  // run / sweep
  auto* run_cmd = app.add_subcommand("run", "Run an experiment grid");
  std::string r_config;
  run_cmd->add_option("--config", r_config)->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment over perturbation levels");
  std::string s_config, s_levels = "1,4,7";
  sweep_cmd->add_option("--config", s_config)->required();
  sweep_cmd->add_option("--levels", s_levels);

  // report
  auto* report_cmd = app.add_subcommand("report", "Aggregate record logs into a table");
  std::string rep_records, rep_format = "md", rep_out;
  bool rep_degradation = false;
  report_cmd->add_option("--records", rep_records, "Record JSONL or directory")->required();
  report_cmd->add_option("--format", rep_format, "csv|json|md");
  report_cmd->add_option("--out", rep_out);
  report_cmd->add_flag("--degradation", rep_degradation, "Print clean-minus-perturbed drops");

  CLI11_PARSE(app, argc, argv);
  if (!data_dir.empty()) setenv("ROP_DATA_DIR", data_dir.c_str(), 1);

  try {
    if (*perturb_cmd) {
      auto type = perturb::parse_perturbation_type(p_type);
      if (!type) throw ConfigError("unknown perturbation type '" + p_type + "'");
      auto mode = perturb::parse_ec_mode(p_ec_mode);
      if (!mode) throw ConfigError("unknown EC mode '" + p_ec_mode + "'");
      const auto ds = core::load_dataset(p_dataset);
      const auto tables = perturb::load_tables(perturb::default_data_dir());
      auto backend = backend_from(p_backend);
      perturb::PerturbOptions opts;
      opts.via_llm = p_via_llm;
      std::vector<std::optional<perturb::AdversarialPair>> out(ds.questions.size());
      std::vector<std::string> skipped(ds.questions.size());
      core::parallel_for(ds.questions.size(), backend ? backend->parallelism() : 1,
                         [&](std::size_t i) {
        const auto& q = ds.questions[i];
        perturb::PerturbationConfig cfg;
        cfg.level = p_level;
        cfg.seed = perturb::question_seed(p_seed, q.id, *type, p_level);
        cfg.protect_numbers = !p_keep_numbers;
        cfg.min_word_len = p_min_len;
        cfg.ec_mode = *mode;
        try {
          out[i] = perturb::AdversarialPair{
              q, perturb::perturb(q, *type, cfg, tables, backend.get(), opts)};
        } catch (const PerturbationError& e) {
          skipped[i] = e.what();
        }
      });
      std::vector<perturb::AdversarialPair> pairs;
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i]) pairs.push_back(std::move(*out[i]));
        if (!skipped[i].empty()) {
          std::cerr << "skipped " << ds.questions[i].id << ": " << skipped[i] << "\n";
        }
      }
      write_adversarial_records(pairs, p_out);
      std::cerr << pairs.size() << " of " << ds.questions.size() << " questions perturbed\n";
    } else if (*adv_cmd) {
      const auto train = core::load_dataset(a_train, core::Split::kTrain);
      const auto types = parse_types(a_types);
      perturb::PerturbationConfig cfg;
      cfg.level = a_level;
      auto backend = backend_from(a_backend);
      const auto adv = perturb::generate_adversarial(train, a_k, types, cfg, a_seed,
                                                     perturb::load_tables(), backend.get());
      perturb::save_adversarial(adv, a_out);
      for (const auto& id : adv.skipped) std::cerr << "skipped ineligible " << id << "\n";
      if (adv.pairs.size() < a_k) {
        std::cerr << "warning: only " << adv.pairs.size() << " of " << a_k
                  << " pairs could be generated\n";
      }
      std::cerr << adv.pairs.size() << " pairs written to " << a_out << "\n";
    } else if (*instr_cmd) {
      auto mode = ape::parse_task_mode(i_mode);
      if (!mode) throw ConfigError("unknown mode '" + i_mode + "'");
      const llm::BackendConfig bcfg = config_from(i_backend);
      auto backend = llm::make_backend(bcfg);
      ape::InstructionTask task;
      if (*mode == ape::TaskMode::kCorrection) {
        const auto adv = perturb::load_adversarial(i_demos);
        task = ape::build_correction_task(adv, std::min(i_m, adv.pairs.size()),
                                          i_eval_frac, i_seed);
        auto scorer = ape::parse_correction_scorer(i_scorer);
        if (!scorer) throw ConfigError("unknown scorer '" + i_scorer + "'");
        task.scorer.correction = *scorer;
        task.scorer.f1_threshold = i_f1;
      } else {
        const auto ds = core::load_dataset(i_demos, core::Split::kTrain);
        std::vector<ape::GuidanceExample> examples;
        for (const auto& q : ds.questions) {
          examples.push_back({q.id, q.text, q.answer, q.candidates});
        }
        task = ape::build_guidance_task(examples, i_eval_frac, i_seed, i_k_guid);
      }
      if (task.score_on_demos) {
        std::cerr << "warning: empty eval split; scoring on the demos\n";
      }
      ape::SearchOptions opts;
      opts.n_candidates = i_candidates;
      opts.proposal.seed = i_seed;
      opts.proposal.temperature = bcfg.proposal_temperature;
      if (!i_meta.empty()) opts.proposal.meta_template = core::read_file(i_meta);
      opts.score.temperature = bcfg.temperature;
      opts.score.max_tokens = bcfg.max_tokens;
      const auto result = ape::search_instruction(task, *backend, opts);
      for (const auto& e : result.errors) std::cerr << "warning: " << e << "\n";
      for (std::size_t i = 0; i < result.candidates.size(); ++i) {
        std::cerr << "candidate " << i << " score " << *result.candidates[i].score << ": "
                  << result.candidates[i].text << "\n";
      }
      ape::InstructionArtifact artifact;
      artifact.mode = *mode;
      artifact.instruction = result.best.text;
      artifact.score = *result.best.score;
      artifact.demos = task.prompt_demos();
      artifact.provenance = {i_seed, i_candidates, backend->model()};
      ape::save_artifact(artifact, i_out);
      std::cout << artifact.instruction << "\n";
    } else if (*correct_cmd) {
      const auto adv = perturb::load_adversarial(c_adv);
      const auto prompt = correction_prompt_from(c_artifacts);
      const llm::BackendConfig bcfg = config_from(c_backend);
      auto backend = llm::make_backend(bcfg);
      pipeline::PipelineOptions opts;
      opts.temperature = bcfg.temperature;
      opts.max_tokens = bcfg.max_tokens;
      core::Dataset out;
      out.questions.resize(adv.pairs.size());
      std::vector<char> fell_back(adv.pairs.size(), 0);
      core::parallel_for(adv.pairs.size(), backend->parallelism(), [&](std::size_t i) {
        const auto& pair = adv.pairs[i];
        auto corrected = pipeline::correct(pair.original.id, pair.perturbed.perturbed_text,
                                           prompt, *backend, opts);
        out.questions[i] = pair.original;
        out.questions[i].text = corrected.corrected_text;
        fell_back[i] = corrected.fallback;
      });
      for (std::size_t i = 0; i < fell_back.size(); ++i) {
        if (fell_back[i]) {
          std::cerr << "warning: empty correction for " << out.questions[i].id
                    << "; kept the perturbed text\n";
        }
      }
      core::save_dataset(out, c_out);
      std::cerr << out.questions.size() << " corrected questions written to " << c_out << "\n";
    } else if (*bundle_cmd) {
      pipeline::ArtifactBundle bundle;
      if (!b_correction.empty()) bundle.correction = ape::load_artifact(b_correction);
      if (!b_guidance.empty()) bundle.guidance = ape::load_artifact(b_guidance);
      if (!bundle.correction && !bundle.guidance) {
        throw ConfigError("bundle needs --correction and/or --guidance");
      }
      pipeline::save_bundle(bundle, b_out);
      // Round-trip to catch swapped modes early.
      pipeline::load_bundle(b_out);
    } else if (*eval_cmd) {
      auto method = pipeline::parse_method(e_method);
      if (!method) throw ConfigError("unknown method '" + e_method + "'");
      harness::ExperimentConfig cfg;
      cfg.datasets = {e_dataset};
      cfg.methods = {*method};
      cfg.perturbations = {harness::parse_cell(nlohmann::json(e_pert))};
      cfg.seeds = {e_seed};
      cfg.backend = config_from(e_backend);
      cfg.pipeline.temperature = cfg.backend.temperature;
      cfg.pipeline.max_tokens = cfg.backend.max_tokens;
      cfg.artifacts = e_artifacts;
      cfg.output_dir = e_out;
      print_table(harness::run_experiment(cfg), e_out);
    } else if (*run_cmd) {
      const auto cfg = harness::load_experiment_config(r_config);
      print_table(harness::run_experiment(cfg), cfg.output_dir);
    } else if (*sweep_cmd) {
      const auto cfg = harness::load_experiment_config(s_config);
      const auto levels = parse_levels(s_levels);
      print_table(harness::level_sweep(cfg, levels), cfg.output_dir);
    } else if (*report_cmd) {
      auto format = harness::parse_report_format(rep_format);
      if (!format) throw ConfigError("unknown report format '" + rep_format + "'");
      const auto records = harness::load_records(rep_records);
      const auto table = harness::aggregate(records);
      const std::string text = harness::emit_report(table, *format);
      if (rep_out.empty()) {
        std::cout << text;
      } else {
        core::write_file(rep_out, text);
      }
      if (rep_degradation) {
        const auto drops = harness::degradation_summary(table);
        std::cout << harness::format_degradation(drops);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
