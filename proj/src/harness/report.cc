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

#include "rop/harness/report.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "rop/core/errors.h"
#include "rop/core/metrics.h"
#include "rop/core/text.h"

namespace rop::harness {

namespace {

int perturbation_rank(std::string_view p) {
  static const char* kOrder[] = {"none", "EC", "SC", "WOO", "HW", "UIC"};
  for (int i = 0; i < 6; ++i) {
    if (p == kOrder[i]) return i;
  }
  return 6;
}

int method_rank(std::string_view m) {
  static const char* kOrder[] = {"Stand", "CoT", "GO", "CO", "RoP"};
  for (int i = 0; i < 5; ++i) {
    if (m == kOrder[i]) return i;
  }
  return 5;
}

auto row_order(const ResultRow& r) {
  return std::make_tuple(r.dataset, perturbation_rank(r.perturbation), r.perturbation,
                         r.level, method_rank(r.method), r.method);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string block_label(const std::string& perturbation, int level) {
  if (perturbation == "none") return "No Pert.";
  if (level <= 1) return perturbation;
  return perturbation + " (level " + std::to_string(level) + ")";
}

std::string emit_csv(const ResultTable& t) {
  std::string out = "dataset,method,perturbation,level,n,accuracy,ci_low,ci_high\n";
  for (const auto& r : t.rows) {
    out += csv_field(r.dataset) + "," + csv_field(r.method) + "," +
           csv_field(r.perturbation) + "," + std::to_string(r.level) + "," +
           std::to_string(r.n) + "," + fixed(r.accuracy, 6) + "," +
           fixed(r.ci_low, 6) + "," + fixed(r.ci_high, 6) + "\n";
  }
  return out;
}

std::string emit_markdown(const ResultTable& t) {
  std::vector<std::string> datasets;
  std::vector<std::pair<std::string, int>> blocks;
  for (const auto& r : t.rows) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) {
      datasets.push_back(r.dataset);
    }
    std::pair<std::string, int> b{r.perturbation, r.level};
    if (std::find(blocks.begin(), blocks.end(), b) == blocks.end()) blocks.push_back(b);
  }
  std::sort(datasets.begin(), datasets.end());
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(perturbation_rank(a.first), a.first, a.second) <
           std::make_tuple(perturbation_rank(b.first), b.first, b.second);
  });

  std::string out = "| Perturbation | Method |";
  std::string rule = "|---|---|";
  for (const auto& d : datasets) {
    out += " " + d + " |";
    rule += "---:|";
  }
  out += " Avg. |\n" + rule + "---:|\n";
  bool any_incomplete = false;
  for (const auto& [pert, level] : blocks) {
    std::vector<std::string> methods;
    for (const auto& r : t.rows) {
      if (r.perturbation == pert && r.level == level &&
          std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
        methods.push_back(r.method);
      }
    }
    std::sort(methods.begin(), methods.end(), [](const auto& a, const auto& b) {
      return std::make_tuple(method_rank(a), a) < std::make_tuple(method_rank(b), b);
    });
    bool first = true;
    for (const auto& m : methods) {
      out += "| " + (first ? block_label(pert, level) : std::string()) + " | " + m + " |";
      first = false;
      double sum = 0;
      int count = 0;
      for (const auto& d : datasets) {
        const ResultRow* row = t.find(d, m, pert, level);
        if (row == nullptr || row->n == 0) {
          out += " - |";
          continue;
        }
        sum += row->accuracy * 100.0;
        ++count;
        out += " " + fixed(row->accuracy * 100.0, 1) + (row->incomplete ? "*" : "") + " |";
        any_incomplete = any_incomplete || row->incomplete;
      }
      out += " " + (count ? fixed(sum / count, 1) : std::string("-")) + " |\n";
    }
  }
  if (any_incomplete) out += "\n\\* more than 10% of questions errored in this cell.\n";
  return out;
}

}  // namespace

void ResultTable::sort() {
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) { return row_order(a) < row_order(b); });
}

const ResultRow* ResultTable::find(std::string_view dataset, std::string_view method,
                                   std::string_view perturbation, int level) const {
  for (const auto& r : rows) {
    if (r.dataset == dataset && r.method == method && r.perturbation == perturbation &&
        r.level == level) {
      return &r;
    }
  }
  return nullptr;
}

ResultTable aggregate(std::span<const RunRecord> records) {
  using Key = std::tuple<std::string, std::string, std::string, int>;
  std::map<Key, std::vector<const RunRecord*>> cells;
  for (const auto& r : records) {
    cells[{r.dataset, r.method, r.perturbation, r.level}].push_back(&r);
  }
  ResultTable table;
  for (const auto& [key, recs] : cells) {
    ResultRow row;
    std::tie(row.dataset, row.method, row.perturbation, row.level) = key;
    std::vector<core::Prediction> preds;
    for (const RunRecord* r : recs) {
      if (r->status == RecordStatus::kSkipped) {
        ++row.skipped;
        continue;
      }
      core::Prediction p;
      p.question_id = r->question_id;
      if (r->status == RecordStatus::kOk) {
        p.correct = r->correct;
      } else {
        ++row.errored;
      }
      if (p.correct.value_or(false)) ++row.correct;
      preds.push_back(std::move(p));
    }
    row.n = preds.size();
    if (row.n > 0) {
      row.accuracy = core::accuracy(preds);
      const auto ci = core::wilson_interval(row.correct, row.n);
      row.ci_low = ci.low;
      row.ci_high = ci.high;
    }
    row.incomplete = row.n == 0 ||
                     static_cast<double>(row.errored) >
                         kIncompleteErrorShare * static_cast<double>(row.n);
    table.rows.push_back(std::move(row));
  }
  table.sort();
  return table;
}

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  const std::string lower = core::to_lower_ascii(s);
  if (lower == "json") return ReportFormat::kJson;
  if (lower == "csv") return ReportFormat::kCsv;
  if (lower == "md" || lower == "markdown") return ReportFormat::kMarkdown;
  return std::nullopt;
}

std::string_view extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::kJson: return "json";
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kMarkdown: return "md";
  }
  return "txt";
}

nlohmann::json to_json(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"dataset", r.dataset},
                    {"method", r.method},
                    {"perturbation", r.perturbation},
                    {"level", r.level},
                    {"n", r.n},
                    {"correct", r.correct},
                    {"accuracy", r.accuracy},
                    {"ci_low", r.ci_low},
                    {"ci_high", r.ci_high},
                    {"errored", r.errored},
                    {"skipped", r.skipped},
                    {"incomplete", r.incomplete}});
  }
  return {{"rows", std::move(rows)}};
}

ResultTable table_from_json(const nlohmann::json& j) {
  ResultTable t;
  try {
    for (const auto& r : j.at("rows")) {
      ResultRow row;
      row.dataset = r.at("dataset").get<std::string>();
      row.method = r.at("method").get<std::string>();
      row.perturbation = r.at("perturbation").get<std::string>();
      row.level = r.at("level").get<int>();
      row.n = r.at("n").get<std::size_t>();
      row.correct = r.value("correct", std::size_t{0});
      row.accuracy = r.at("accuracy").get<double>();
      row.ci_low = r.value("ci_low", 0.0);
      row.ci_high = r.value("ci_high", 0.0);
      row.errored = r.value("errored", std::size_t{0});
      row.skipped = r.value("skipped", std::size_t{0});
      row.incomplete = r.value("incomplete", false);
      t.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("result table: ") + e.what());
  }
  return t;
}

std::string emit_report(const ResultTable& table, ReportFormat format) {
  if (table.rows.empty()) throw ConfigError("cannot report an empty result table");
  switch (format) {
    case ReportFormat::kJson: return to_json(table).dump(2) + "\n";
    case ReportFormat::kCsv: return emit_csv(table);
    case ReportFormat::kMarkdown: return emit_markdown(table);
  }
  throw ConfigError("unknown report format");
}

std::vector<Degradation> degradation_summary(const ResultTable& table) {
  const bool has_clean = std::any_of(table.rows.begin(), table.rows.end(),
                                     [](const ResultRow& r) { return r.perturbation == "none"; });
  if (!has_clean) throw ConfigError("degradation summary needs a \"No Pert.\" stratum");
  std::vector<Degradation> out;
  for (const auto& r : table.rows) {
    if (r.perturbation == "none") continue;
    const ResultRow* clean = table.find(r.dataset, r.method, "none", 0);
    if (clean == nullptr) clean = table.find(r.dataset, "Stand", "none", 0);
    if (clean == nullptr) {
      throw ConfigError("no clean row for dataset \"" + r.dataset + "\" (method " +
                        r.method + " or Stand)");
    }
    out.push_back({r.dataset, r.method, r.perturbation, r.level, clean->accuracy,
                   r.accuracy, clean->accuracy - r.accuracy, clean->method});
  }
  return out;
}

std::string format_degradation(std::span<const Degradation> rows) {
  std::string out = "dataset,method,perturbation,level,clean,perturbed,drop,clean_method\n";
  for (const auto& d : rows) {
    out += csv_field(d.dataset) + "," + csv_field(d.method) + "," + d.perturbation + "," +
           std::to_string(d.level) + "," + fixed(d.clean_accuracy * 100, 1) + "," +
           fixed(d.perturbed_accuracy * 100, 1) + "," + fixed(d.drop * 100, 1) + "," +
           d.clean_method + "\n";
  }
  return out;
}

}  // namespace rop::harness
