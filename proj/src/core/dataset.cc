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

#include "rop/core/dataset.h"

#include <filesystem>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "rop/core/answer.h"
#include "rop/core/errors.h"
#include "rop/core/random.h"
#include "rop/core/text.h"
#include "rop/core/utf8.h"

namespace rop::core {
namespace {

std::string at_line(std::size_t line) {
  return line ? "line " + std::to_string(line) + ": " : std::string();
}

std::string require_string(const nlohmann::json& record, const char* field,
                           std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw DatasetError(at_line(line) + "missing field \"" + field + "\"", line);
  }
  if (!it->is_string()) {
    throw DatasetError(at_line(line) + "field \"" + field + "\" must be a string",
                       line);
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(AnswerKind kind) {
  switch (kind) {
    case AnswerKind::kNumeric:
      return "numeric";
    case AnswerKind::kChoice:
      return "choice";
    case AnswerKind::kBoolean:
      return "boolean";
    case AnswerKind::kFreetext:
      return "freetext";
  }
  return "numeric";
}

std::optional<AnswerKind> parse_answer_kind(std::string_view s) {
  if (s == "numeric") return AnswerKind::kNumeric;
  if (s == "choice") return AnswerKind::kChoice;
  if (s == "boolean") return AnswerKind::kBoolean;
  if (s == "freetext") return AnswerKind::kFreetext;
  return std::nullopt;
}

void validate_question(const Question& q, std::size_t line) {
  auto fail = [&](const std::string& field, const std::string& why) {
    throw DatasetError(at_line(line) + "field \"" + field + "\" " + why, line);
  };
  if (q.id.empty()) fail("id", "must be non-empty");
  if (trim(q.text).empty()) fail("question", "must be non-empty");
  if (!utf8::is_valid(q.text)) fail("question", "is not valid UTF-8");
  switch (q.answer.kind) {
    case AnswerKind::kNumeric:
      if (!parse_decimal(q.answer.value)) {
        fail("answer", "must be a finite decimal for answer_kind numeric");
      }
      break;
    case AnswerKind::kBoolean:
      if (q.answer.value != "yes" && q.answer.value != "no") {
        fail("answer", "must be \"yes\" or \"no\" for answer_kind boolean");
      }
      break;
    case AnswerKind::kChoice: {
      bool found = false;
      for (const auto& c : q.candidates) found |= c.label == q.answer.value;
      if (!found) fail("answer", "must equal one of the choice labels");
      break;
    }
    case AnswerKind::kFreetext:
      if (trim(q.answer.value).empty()) fail("answer", "must be non-empty");
      break;
  }
  std::unordered_set<std::string> labels;
  for (const auto& c : q.candidates) {
    if (c.label.empty()) fail("choices", "labels must be non-empty");
    if (!labels.insert(c.label).second) {
      fail("choices", "has duplicate label \"" + c.label + "\"");
    }
  }
}

Question question_from_json(const nlohmann::json& record, std::size_t line) {
  if (!record.is_object()) {
    throw DatasetError(at_line(line) + "record must be a JSON object", line);
  }
  Question q;
  q.id = require_string(record, "id", line);
  q.text = require_string(record, "question", line);
  q.answer.value = require_string(record, "answer", line);
  std::string kind = require_string(record, "answer_kind", line);
  auto parsed = parse_answer_kind(kind);
  if (!parsed) {
    throw DatasetError(
        at_line(line) + "field \"answer_kind\" has unknown value \"" + kind + "\"",
        line);
  }
  q.answer.kind = *parsed;
  if (auto it = record.find("choices"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw DatasetError(at_line(line) + "field \"choices\" must be an array",
                         line);
    }
    for (const auto& c : *it) {
      if (!c.is_object()) {
        throw DatasetError(at_line(line) + "field \"choices\" entries must be objects",
                           line);
      }
      q.candidates.push_back(
          {require_string(c, "label", line), require_string(c, "body", line)});
    }
  }
  validate_question(q, line);
  return q;
}

nlohmann::json question_to_json(const Question& q) {
  nlohmann::json j = {{"id", q.id},
                      {"question", q.text},
                      {"answer", q.answer.value},
                      {"answer_kind", std::string(to_string(q.answer.kind))}};
  if (!q.candidates.empty()) {
    auto& choices = j["choices"] = nlohmann::json::array();
    for (const auto& c : q.candidates) {
      choices.push_back({{"label", c.label}, {"body", c.body}});
    }
  }
  return j;
}

Dataset parse_dataset(const std::string& contents, const std::string& name,
                      Split split) {
  Dataset ds{name, split, {}};
  std::unordered_set<std::string> ids;
  std::istringstream in(contents);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError(at_line(line_no) + "malformed JSON: " + e.what(),
                         line_no);
    }
    Question q = question_from_json(record, line_no);
    if (!ids.insert(q.id).second) {
      throw DatasetError(at_line(line_no) + "duplicate id \"" + q.id + "\"",
                         line_no);
    }
    ds.questions.push_back(std::move(q));
  }
  return ds;
}

Dataset load_dataset(const std::string& path, Split split) {
  if (!std::filesystem::exists(path)) {
    throw DatasetError("dataset file '" + path + "' does not exist");
  }
  return parse_dataset(read_file(path), std::filesystem::path(path).stem(),
                       split);
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::string out;
  for (const auto& q : dataset.questions) {
    out += question_to_json(q).dump();
    out += '\n';
  }
  write_file(path, out);
}

std::vector<Question> sample_questions(const Dataset& dataset, std::size_t k,
                                       std::uint64_t seed) {
  const std::size_t n = dataset.questions.size();
  if (k == 0 || k > n) {
    throw ConfigError("cannot sample " + std::to_string(k) + " questions from a dataset of " +
                std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::vector<Question> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.uniform(n - i);
    std::swap(order[i], order[j]);
    out.push_back(dataset.questions[order[i]]);
  }
  return out;
}

}  // namespace rop::core
