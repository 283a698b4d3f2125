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

#include "rop/perturb/tables.h"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "rop/core/errors.h"
#include "rop/core/text.h"
#include "rop/core/utf8.h"

#ifndef ROP_DEFAULT_DATA_DIR
#define ROP_DEFAULT_DATA_DIR "data"
#endif

namespace rop::perturb {
namespace {

struct TsvLine {
  std::size_t number;
  std::string key;
  std::vector<std::string> values;
};

std::vector<TsvLine> parse_tsv(std::string_view contents, const char* what) {
  std::vector<TsvLine> out;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (core::trim(line).empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError(std::string(what) + " line " + std::to_string(number) +
                        ": expected key<TAB>values");
    }
    TsvLine entry{number, line.substr(0, tab), {}};
    for (auto& v : core::split(std::string_view(line).substr(tab + 1), ',')) {
      std::string t = core::trim(v);
      if (!t.empty()) entry.values.push_back(std::move(t));
    }
    out.push_back(std::move(entry));
  }
  return out;
}

const std::vector<char32_t> kNoVariants;
const std::vector<std::string> kNoAlternatives;

}  // namespace

ConfusableTable ConfusableTable::parse(std::string_view contents) {
  ConfusableTable table;
  for (const auto& line : parse_tsv(contents, "confusables")) {
    auto where = [&] {
      return "confusables line " + std::to_string(line.number) + ": ";
    };
    std::u32string key = core::utf8::decode(line.key);
    if (key.size() != 1) throw ConfigError(where() + "key must be one character");
    auto& variants = table.table_[key[0]];
    for (const auto& v : line.values) {
      std::u32string cp = core::utf8::decode(v);
      if (cp.size() != 1) {
        throw ConfigError(where() + "variant '" + v + "' must be one character");
      }
      if (cp[0] == key[0]) continue;
      if (std::find(variants.begin(), variants.end(), cp[0]) == variants.end()) {
        variants.push_back(cp[0]);
      }
    }
    if (variants.empty()) table.table_.erase(key[0]);
  }
  return table;
}

ConfusableTable ConfusableTable::load(const std::string& path) {
  return parse(core::read_file(path));
}

const std::vector<char32_t>& ConfusableTable::variants(char32_t c) const {
  auto it = table_.find(c);
  return it == table_.end() ? kNoVariants : it->second;
}

bool ConfusableTable::contains(char32_t c, char32_t variant) const {
  const auto& v = variants(c);
  return std::find(v.begin(), v.end(), variant) != v.end();
}

HomophoneDictionary HomophoneDictionary::parse(std::string_view contents) {
  HomophoneDictionary dict;
  for (const auto& line : parse_tsv(contents, "homophones")) {
    std::string key = core::trim(line.key);
    if (key.empty() || key != core::to_lower_ascii(key)) {
      throw ConfigError("homophones line " + std::to_string(line.number) +
                        ": keys must be non-empty and lowercase");
    }
    auto& alts = dict.table_[key];
    for (const auto& v : line.values) {
      if (v != key && std::find(alts.begin(), alts.end(), v) == alts.end()) {
        alts.push_back(v);
      }
    }
    if (alts.empty()) dict.table_.erase(key);
  }
  return dict;
}

HomophoneDictionary HomophoneDictionary::load(const std::string& path) {
  return parse(core::read_file(path));
}

const std::vector<std::string>& HomophoneDictionary::alternatives(
    std::string_view lower_word) const {
  auto it = table_.find(lower_word);
  return it == table_.end() ? kNoAlternatives : it->second;
}

bool HomophoneDictionary::contains(std::string_view lower_word,
                                   std::string_view alt) const {
  const auto& alts = alternatives(lower_word);
  return std::find(alts.begin(), alts.end(), alt) != alts.end();
}

std::string default_data_dir() {
  if (const char* env = std::getenv("ROP_DATA_DIR"); env && *env) return env;
  return ROP_DEFAULT_DATA_DIR;
}

PerturbTables load_tables(const std::string& data_dir) {
  PerturbTables t;
  t.confusables = ConfusableTable::load(data_dir + "/confusables.tsv");
  t.homophones = HomophoneDictionary::load(data_dir + "/homophones.tsv");
  t.rewrite_template = core::read_file(data_dir + "/prompts/perturb_rewrite.txt");
  return t;
}

}  // namespace rop::perturb
