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

#include "rop/ape/search.h"

#include <atomic>
#include <filesystem>
#include <map>
#include <set>

#include "rop/core/answer.h"
#include "rop/core/errors.h"
#include "rop/core/parallel.h"
#include "rop/core/random.h"
#include "rop/core/text.h"
#include "rop/llm/render.h"
#include "rop/perturb/tables.h"

namespace rop::ape {

std::string seeded_instruction(TaskMode mode) {
  if (mode == TaskMode::kCorrection) {
    return "The input is a question that may contain typos, swapped letters, "
           "look-alike characters, words in the wrong order, sound-alike words "
           "or an unrelated extra sentence. Rewrite it as the intended question "
           "and reply with the rewritten question only.";
  }
  return "Work through the question step by step, then finish with "
         "\"The answer is\" followed by the final answer.";
}

std::string load_meta_template(TaskMode mode, const std::string& data_dir) {
  const std::string dir = data_dir.empty() ? perturb::default_data_dir() : data_dir;
  const auto path = std::filesystem::path(dir) / "prompts" /
                    (std::string("propose_") + std::string(to_string(mode)) + ".txt");
  if (!std::filesystem::exists(path)) {
    throw ConfigError("meta-prompt file '" + path.string() + "' does not exist");
  }
  return core::read_file(path.string());
}

std::string clean_proposal(std::string_view raw) {
  std::string s = core::trim(raw);
  static const char* kPrefixes[] = {"the instruction was:", "the instruction is:",
                                    "instruction:"};
  for (const char* prefix : kPrefixes) {
    const std::string p = prefix;
    if (core::to_lower_ascii(s.substr(0, p.size())) == p) {
      s = core::trim(s.substr(p.size()));
      break;
    }
  }
  static const std::pair<std::string, std::string> kQuotes[] = {
      {"\"", "\""}, {"'", "'"}, {"`", "`"}, {"“", "”"}};
  for (const auto& [open, close] : kQuotes) {
    if (s.size() >= open.size() + close.size() && s.starts_with(open) &&
        s.ends_with(close)) {
      s = core::trim(s.substr(open.size(), s.size() - open.size() - close.size()));
      break;
    }
  }
  return core::collapse_whitespace(s);
}

ProposalResult propose_instructions(const InstructionTask& task,
                                    std::size_t n_candidates,
                                    llm::ChatBackend& backend,
                                    const ProposalOptions& opts) {
  if (n_candidates == 0) throw ConfigError("n_candidates must be >= 1");
  task.validate();
  const std::string tmpl = opts.meta_template.empty()
                               ? load_meta_template(task.mode, {})
                               : opts.meta_template;

  std::vector<std::optional<std::string>> texts(n_candidates);
  std::vector<std::string> call_errors(n_candidates);
  core::parallel_for(n_candidates, backend.parallelism(), [&](std::size_t i) {
    std::vector<TaskItem> shown = task.demos;
    core::Rng rng(core::derive_seed(opts.seed, {"proposal", std::to_string(i)}));
    rng.shuffle(std::span(shown));
    if (opts.demos_per_proposal > 0 && shown.size() > opts.demos_per_proposal) {
      shown.resize(opts.demos_per_proposal);
    }
    std::string block;
    for (const auto& d : shown) {
      if (!block.empty()) block += "\n\n";
      block += "Input: " + d.input + "\nOutput: " + d.output;
    }
    llm::ChatRequest req;
    req.messages.push_back(
        {llm::Role::kUser, core::render_template(tmpl, {{"demos", block}})});
    req.temperature = opts.temperature;
    req.max_tokens = opts.max_tokens;
    try {
      texts[i] = clean_proposal(backend.complete(req).text);
    } catch (const BackendError& e) {
      call_errors[i] = "proposal " + std::to_string(i) + ": " + e.what();
    }
  });

  ProposalResult result;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < n_candidates; ++i) {
    if (!call_errors[i].empty()) result.errors.push_back(call_errors[i]);
    if (!texts[i] || texts[i]->empty()) continue;
    if (seen.insert(*texts[i]).second) {
      result.candidates.push_back({*texts[i], std::nullopt, InstructionOrigin::kProposed});
    }
  }
  if (result.candidates.empty()) {
    result.candidates.push_back(
        {seeded_instruction(task.mode), std::nullopt, InstructionOrigin::kSeeded});
  }
  return result;
}

double token_f1(std::string_view prediction, std::string_view reference) {
  auto tokens = [](std::string_view s) {
    std::map<std::string, int> counts;
    for (auto& t : core::split(core::collapse_whitespace(core::to_lower_ascii(s)), ' ')) {
      if (!t.empty()) ++counts[t];
    }
    return counts;
  };
  const auto p = tokens(prediction);
  const auto r = tokens(reference);
  int np = 0, nr = 0, overlap = 0;
  for (const auto& [t, c] : p) np += c;
  for (const auto& [t, c] : r) {
    nr += c;
    if (auto it = p.find(t); it != p.end()) overlap += std::min(c, it->second);
  }
  if (np == 0 && nr == 0) return 1.0;
  if (overlap == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / np;
  const double recall = static_cast<double>(overlap) / nr;
  return 2 * precision * recall / (precision + recall);
}

bool item_correct(const InstructionTask& task, const TaskItem& item,
                  const std::string& completion, llm::ChatBackend& backend,
                  const ScoreOptions& opts) {
  if (task.mode == TaskMode::kGuidance) {
    if (!item.gold) {
      return core::collapse_whitespace(completion) == core::collapse_whitespace(item.output);
    }
    return core::make_prediction(item.id, completion, *item.gold).correct.value_or(false);
  }
  switch (task.scorer.correction) {
    case CorrectionScorer::kExact:
      return core::collapse_whitespace(completion) == core::collapse_whitespace(item.output);
    case CorrectionScorer::kTokenF1:
      return token_f1(completion, item.output) >= task.scorer.f1_threshold;
    case CorrectionScorer::kDownstream: {
      if (!item.gold) {
        throw ConfigError("downstream scoring needs a gold answer for \"" + item.id + "\"");
      }
      std::string corrected = core::trim(completion);
      if (corrected.empty()) corrected = item.input;
      const auto req = llm::render_prompt(
          Prompt{}, format_query(corrected, item.candidates),
          {"", opts.temperature, opts.max_tokens});
      const auto answer = backend.complete(req);
      return core::make_prediction(item.id, answer.text, *item.gold)
          .correct.value_or(false);
    }
  }
  return false;
}

void score_candidates(std::vector<Instruction>& candidates,
                      const InstructionTask& task, llm::ChatBackend& backend,
                      const ScoreOptions& opts) {
  task.validate();
  const auto& items = task.scoring_set();
  const std::vector<Demo> demos = task.prompt_demos();
  const std::size_t total = candidates.size() * items.size();
  std::vector<char> hits(total, 0);
  std::atomic<std::size_t> done{0};
  const std::size_t workers = opts.workers ? opts.workers : backend.parallelism();
  core::parallel_for(total, workers, [&](std::size_t k) {
    const std::size_t c = k / items.size();
    const TaskItem& item = items[k % items.size()];
    try {
      const Prompt prompt{candidates[c], demos};
      const auto req = llm::render_prompt(prompt, item.input,
                                          {"", opts.temperature, opts.max_tokens});
      const auto completion = backend.complete(req);
      hits[k] = item_correct(task, item, completion.text, backend, opts) ? 1 : 0;
      ++done;
    } catch (const BackendError& e) {
      throw BackendError("scoring candidate " + std::to_string(c) + " on item \"" +
                         item.id + "\" failed after " + std::to_string(done.load()) +
                         "/" + std::to_string(total) + " evaluations: " + e.what());
    }
  });
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < items.size(); ++i) correct += hits[c * items.size() + i];
    candidates[c].score = static_cast<double>(correct) / static_cast<double>(items.size());
  }
}

double score_instruction(const Instruction& instr, const InstructionTask& task,
                         llm::ChatBackend& backend, const ScoreOptions& opts) {
  std::vector<Instruction> one{instr};
  score_candidates(one, task, backend, opts);
  return *one.front().score;
}

std::size_t select_best_index(std::span<const Instruction> candidates) {
  if (candidates.empty()) throw ConfigError("select_best: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].score) {
      throw ConfigError("select_best: candidate " + std::to_string(i) + " is unscored");
    }
    if (*candidates[i].score > *candidates[best].score) best = i;
  }
  return best;
}

Instruction select_best(std::span<const Instruction> candidates) {
  return candidates[select_best_index(candidates)];
}

SearchResult search_instruction(const InstructionTask& task,
                                llm::ChatBackend& backend,
                                const SearchOptions& opts) {
  ProposalResult proposed =
      propose_instructions(task, opts.n_candidates, backend, opts.proposal);
  score_candidates(proposed.candidates, task, backend, opts.score);
  SearchResult result;
  result.best = select_best(proposed.candidates);
  result.candidates = std::move(proposed.candidates);
  result.errors = std::move(proposed.errors);
  return result;
}

}  // namespace rop::ape
