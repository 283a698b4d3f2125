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

#ifndef ROP_HARNESS_REPORT_H_
#define ROP_HARNESS_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rop/harness/records.h"

namespace rop::harness {

// Share of errored questions above which a cell is flagged incomplete.
inline constexpr double kIncompleteErrorShare = 0.10;

struct ResultRow {
  std::string dataset;
  std::string method;
  std::string perturbation;
  int level = 0;
  std::size_t n = 0;  // ok + errored; skipped questions excluded
  std::size_t correct = 0;
  double accuracy = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t errored = 0;
  std::size_t skipped = 0;
  bool incomplete = false;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;

  // Canonical order: dataset, perturbation block, level, method.
  void sort();
  const ResultRow* find(std::string_view dataset, std::string_view method,
                        std::string_view perturbation, int level) const;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

ResultTable aggregate(std::span<const RunRecord> records);

enum class ReportFormat { kJson, kCsv, kMarkdown };

std::optional<ReportFormat> parse_report_format(std::string_view s);
std::string_view extension(ReportFormat f);

nlohmann::json to_json(const ResultTable& table);
ResultTable table_from_json(const nlohmann::json& j);

// Byte-deterministic for a given table. Throws ConfigError when empty.
std::string emit_report(const ResultTable& table, ReportFormat format);

struct Degradation {
  std::string dataset;
  std::string method;
  std::string perturbation;
  int level = 0;
  double clean_accuracy = 0.0;
  double perturbed_accuracy = 0.0;
  double drop = 0.0;
  // Method whose clean row was used (the same method, else Stand).
  std::string clean_method;
};

// One entry per perturbed row. Throws ConfigError when a dataset has no
// usable clean row.
std::vector<Degradation> degradation_summary(const ResultTable& table);

std::string format_degradation(std::span<const Degradation> rows);

}  // namespace rop::harness

#endif  // ROP_HARNESS_REPORT_H_
