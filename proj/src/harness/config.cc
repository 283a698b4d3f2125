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

#include "rop/harness/config.h"

#include <filesystem>
#include <set>

#include "rop/core/errors.h"
#include "rop/core/text.h"

namespace rop::harness {

std::string cell_name(const PerturbationCell& cell) {
  return cell.type ? std::string(perturb::to_string(*cell.type)) : "none";
}

namespace {

PerturbationCell make_cell(const std::string& type_name, std::optional<int> level) {
  PerturbationCell cell;
  const std::string lower = core::to_lower_ascii(type_name);
  if (lower == "none" || lower == "clean") {
    return cell;
  }
  auto type = perturb::parse_perturbation_type(type_name);
  if (!type) throw ConfigError("unknown perturbation type '" + type_name + "'");
  cell.type = *type;
  if (*type == perturb::PerturbationType::kUIC) return cell;
  cell.level = level.value_or(1);
  if (cell.level < 1) {
    throw ConfigError("perturbation " + type_name + " has level " +
                      std::to_string(cell.level) + "; levels must be >= 1");
  }
  return cell;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  if (p.empty() || base_dir.empty()) return p;
  std::filesystem::path path(p);
  return path.is_relative() ? (std::filesystem::path(base_dir) / path).string() : p;
}

}  // namespace

PerturbationCell parse_cell(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto colon = s.find(':');
    if (colon == std::string::npos) return make_cell(s, std::nullopt);
    int level = 0;
    try {
      level = std::stoi(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad perturbation level in '" + s + "'");
    }
    return make_cell(s.substr(0, colon), level);
  }
  if (j.is_object() && j.contains("type") && j["type"].is_string()) {
    std::optional<int> level;
    if (auto it = j.find("level"); it != j.end() && it->is_number_integer()) {
      level = it->get<int>();
    }
    return make_cell(j["type"].get<std::string>(), level);
  }
  throw ConfigError("perturbation entry must be a string or {\"type\", \"level\"}: " +
                    j.dump());
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw ConfigError("experiment: datasets must be non-empty");
  if (methods.empty()) throw ConfigError("experiment: methods must be non-empty");
  if (perturbations.empty()) {
    throw ConfigError("experiment: perturbations must be non-empty (use \"none\" for clean)");
  }
  if (seeds.empty()) throw ConfigError("experiment: seeds must be non-empty");
  for (const auto& cell : perturbations) {
    if (cell.type && *cell.type != perturb::PerturbationType::kUIC && cell.level < 1) {
      throw ConfigError("experiment: levels must be >= 1");
    }
  }
  if (sample_limit && *sample_limit == 0) {
    throw ConfigError("experiment: sample_limit must be >= 1");
  }
  if (min_word_len < 2) throw ConfigError("experiment: min_word_len must be >= 2");
  if (output_dir.empty()) throw ConfigError("experiment: output_dir must be non-empty");
  backend.validate();
  if (perturbation_backend) perturbation_backend->validate();
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  try {
    for (const auto& d : j.at("datasets")) {
      cfg.datasets.push_back(resolve(base_dir, d.get<std::string>()));
    }
    for (const auto& m : j.at("methods")) {
      const std::string name = m.get<std::string>();
      auto method = pipeline::parse_method(name);
      if (!method) throw ConfigError("experiment: unknown method '" + name + "'");
      cfg.methods.push_back(*method);
    }
    if (auto it = j.find("perturbations"); it != j.end()) {
      for (const auto& p : *it) cfg.perturbations.push_back(parse_cell(p));
    } else {
      cfg.perturbations.push_back({});
    }
    if (auto it = j.find("seeds"); it != j.end()) {
      cfg.seeds = it->get<std::vector<std::uint64_t>>();
    }
    if (auto it = j.find("backend"); it != j.end()) {
      cfg.backend = llm::backend_config_from_json(*it, base_dir);
    }
    if (auto it = j.find("perturbation_backend"); it != j.end() && !it->is_null()) {
      cfg.perturbation_backend = llm::backend_config_from_json(*it, base_dir);
    }
    cfg.perturb_via_llm = j.value("perturb_via_llm", false);
    cfg.artifacts = resolve(base_dir, j.value("artifacts", std::string{}));
    cfg.cot_exemplars = resolve(base_dir, j.value("cot_exemplars", std::string{}));
    cfg.output_dir = resolve(base_dir, j.value("output_dir", cfg.output_dir));
    if (auto it = j.find("sample_limit"); it != j.end() && !it->is_null()) {
      cfg.sample_limit = it->get<std::size_t>();
    }
    cfg.data_dir = resolve(base_dir, j.value("data_dir", std::string{}));
    cfg.protect_numbers = j.value("protect_numbers", true);
    cfg.min_word_len = j.value("min_word_len", 3);
    if (auto it = j.find("ec_mode"); it != j.end()) {
      auto mode = perturb::parse_ec_mode(it->get<std::string>());
      if (!mode) throw ConfigError("experiment: unknown ec_mode " + it->dump());
      cfg.ec_mode = *mode;
    }
    if (auto it = j.find("correction_delimiter"); it != j.end() && !it->is_null()) {
      cfg.pipeline.delimiter = it->get<std::string>();
    }
    cfg.pipeline.temperature = cfg.backend.temperature;
    cfg.pipeline.max_tokens = cfg.backend.max_tokens;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : cfg.methods) methods.push_back(std::string(pipeline::cli_name(m)));
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : cfg.perturbations) {
    nlohmann::json cell = {{"type", cell_name(c)}};
    if (c.level > 0) cell["level"] = c.level;
    cells.push_back(cell);
  }
  nlohmann::json j = {{"datasets", cfg.datasets},
                      {"methods", methods},
                      {"perturbations", cells},
                      {"seeds", cfg.seeds},
                      {"backend", llm::to_json(cfg.backend)},
                      {"perturb_via_llm", cfg.perturb_via_llm},
                      {"artifacts", cfg.artifacts},
                      {"cot_exemplars", cfg.cot_exemplars},
                      {"output_dir", cfg.output_dir},
                      {"data_dir", cfg.data_dir},
                      {"protect_numbers", cfg.protect_numbers},
                      {"min_word_len", cfg.min_word_len},
                      {"ec_mode", std::string(perturb::to_string(cfg.ec_mode))}};
  if (cfg.perturbation_backend) {
    j["perturbation_backend"] = llm::to_json(*cfg.perturbation_backend);
  }
  if (cfg.sample_limit) j["sample_limit"] = *cfg.sample_limit;
  if (cfg.pipeline.delimiter) j["correction_delimiter"] = *cfg.pipeline.delimiter;
  return j;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("experiment config '" + path + "' does not exist");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(core::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("experiment config '" + path + "': " + e.what());
  }
  return experiment_config_from_json(
      j, std::filesystem::path(path).parent_path().string());
}

}  // namespace rop::harness
