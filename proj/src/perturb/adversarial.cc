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

#include "rop/perturb/adversarial.h"

#include <filesystem>
#include <sstream>

#include "rop/core/dataset.h"
#include "rop/core/errors.h"
#include "rop/core/random.h"
#include "rop/core/text.h"

namespace rop::perturb {

std::uint64_t question_seed(std::uint64_t seed, const std::string& question_id,
                            PerturbationType type, int level) {
  return core::derive_seed(
      seed, {question_id, to_string(type), std::to_string(level)});
}

AdversarialDataset generate_adversarial(const core::Dataset& train,
                                        std::size_t k,
                                        std::span<const PerturbationType> types,
                                        const PerturbationConfig& cfg,
                                        std::uint64_t seed,
                                        const PerturbTables& tables,
                                        llm::ChatBackend* backend,
                                        const AdversarialOptions& opts) {
  cfg.validate();
  if (types.empty()) throw ConfigError("generate_adversarial: no perturbation types");
  if (k == 0 || k > train.questions.size()) {
    throw ConfigError("generate_adversarial: k=" + std::to_string(k) +
                      " but the training set has " +
                      std::to_string(train.questions.size()) + " questions");
  }

  AdversarialDataset out;
  out.seed = seed;
  out.k = k;
  out.level = cfg.level;
  out.types.assign(types.begin(), types.end());
  core::Rng order_rng(core::derive_seed(seed, {"type-order"}));
  order_rng.shuffle(std::span(out.types));

  // A full seeded permutation; the first k draws equal sample_questions(k).
  const auto draws = core::sample_questions(train, train.questions.size(), seed);
  for (const auto& q : draws) {
    if (out.pairs.size() == k) break;
    const PerturbationType type = out.types[out.pairs.size() % out.types.size()];
    PerturbationConfig qcfg = cfg;
    qcfg.seed = question_seed(seed, q.id, type, cfg.level);
    try {
      out.pairs.push_back(
          {q, perturb(q, type, qcfg, tables, backend, opts.perturb)});
    } catch (const PerturbationError&) {
      if (!opts.skip_ineligible) throw;
      out.skipped.push_back(q.id);
    }
  }
  return out;
}

nlohmann::json pair_to_json(const AdversarialPair& pair) {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : pair.perturbed.edits) {
    edits.push_back(
        {{"start", e.start}, {"end", e.end}, {"before", e.before}, {"after", e.after}});
  }
  nlohmann::json j = {
      {"id", pair.original.id},
      {"original", pair.original.text},
      {"perturbed", pair.perturbed.perturbed_text},
      {"type", std::string(to_string(pair.perturbed.type))},
      {"answer", pair.original.answer.value},
      {"answer_kind", std::string(core::to_string(pair.original.answer.kind))},
      {"edits", std::move(edits)}};
  if (!pair.original.candidates.empty()) {
    j["choices"] = core::question_to_json(pair.original)["choices"];
  }
  return j;
}

AdversarialPair pair_from_json(const nlohmann::json& j, std::size_t line) {
  const std::string where = line ? "line " + std::to_string(line) + ": " : "";
  auto fail = [&](const std::string& why) -> void {
    throw DatasetError(where + why, line);
  };
  if (!j.is_object()) fail("record must be a JSON object");
  for (const char* field : {"original", "perturbed", "type"}) {
    if (!j.contains(field) || !j[field].is_string()) {
      fail(std::string("field \"") + field + "\" must be a string");
    }
  }
  nlohmann::json as_question = j;
  as_question["question"] = j["original"];
  AdversarialPair pair;
  pair.original = core::question_from_json(as_question, line);

  auto type = parse_perturbation_type(j["type"].get<std::string>());
  if (!type) fail("field \"type\" has unknown value");
  PerturbedQuestion& p = pair.perturbed;
  p.original_id = pair.original.id;
  p.perturbed_text = j["perturbed"].get<std::string>();
  p.type = *type;
  p.answer = pair.original.answer;
  p.candidates = pair.original.candidates;
  if (auto it = j.find("edits"); it != j.end()) {
    if (!it->is_array()) fail("field \"edits\" must be an array");
    for (const auto& e : *it) {
      try {
        p.edits.push_back({e.at("start").get<std::size_t>(),
                           e.at("end").get<std::size_t>(),
                           e.at("before").get<std::string>(),
                           e.at("after").get<std::string>(), *type});
      } catch (const nlohmann::json::exception&) {
        fail("malformed entry in \"edits\"");
      }
    }
  }
  std::string rebuilt;
  try {
    rebuilt = apply_edits(pair.original.text, p.edits);
  } catch (const Error& e) {
    fail(std::string("edits do not apply: ") + e.what());
  }
  if (rebuilt != p.perturbed_text) {
    fail("edits do not reproduce the perturbed text");
  }
  return pair;
}

void save_adversarial(const AdversarialDataset& adv, const std::string& path) {
  std::string out;
  for (const auto& pair : adv.pairs) {
    out += pair_to_json(pair).dump();
    out += '\n';
  }
  core::write_file(path, out);
  nlohmann::json types = nlohmann::json::array();
  for (auto t : adv.types) types.push_back(std::string(to_string(t)));
  nlohmann::json meta = {{"seed", adv.seed},   {"k", adv.k},
                         {"types", types},     {"level", adv.level},
                         {"skipped", adv.skipped}};
  core::write_file(path + ".meta.json", meta.dump(2) + "\n");
}

AdversarialDataset load_adversarial(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw DatasetError("adversarial file '" + path + "' does not exist");
  }
  AdversarialDataset adv;
  std::istringstream in(core::read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (core::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what(),
                         line_no);
    }
    adv.pairs.push_back(pair_from_json(j, line_no));
  }
  adv.k = adv.pairs.size();
  const std::string meta_path = path + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    auto meta = nlohmann::json::parse(core::read_file(meta_path));
    adv.seed = meta.value("seed", std::uint64_t{0});
    adv.k = meta.value("k", adv.k);
    adv.level = meta.value("level", 1);
    for (const auto& t : meta.value("types", nlohmann::json::array())) {
      if (auto parsed = parse_perturbation_type(t.get<std::string>())) {
        adv.types.push_back(*parsed);
      }
    }
    adv.skipped = meta.value("skipped", std::vector<std::string>{});
  }
  return adv;
}

}  // namespace rop::perturb
