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

#ifndef ROP_PERTURB_TABLES_H_
#define ROP_PERTURB_TABLES_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rop::perturb {

// Character -> visually similar replacements. File format: UTF-8 TSV,
// `char<TAB>variant1,variant2,...`, `#` starts a comment line.
class ConfusableTable {
 public:
  static ConfusableTable parse(std::string_view contents);
  static ConfusableTable load(const std::string& path);

  // Empty when `c` has no entry.
  const std::vector<char32_t>& variants(char32_t c) const;
  bool contains(char32_t c, char32_t variant) const;
  bool empty() const { return table_.empty(); }
  std::size_t size() const { return table_.size(); }

 private:
  std::map<char32_t, std::vector<char32_t>> table_;
};

// Lowercase word -> homophones. File format: UTF-8 TSV,
// `word<TAB>alt1,alt2,...`, `#` comment lines.
class HomophoneDictionary {
 public:
  static HomophoneDictionary parse(std::string_view contents);
  static HomophoneDictionary load(const std::string& path);

  // Empty when `lower_word` is not a key.
  const std::vector<std::string>& alternatives(std::string_view lower_word) const;
  bool contains(std::string_view lower_word, std::string_view alt) const;
  bool empty() const { return table_.empty(); }
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> table_;
};

// Everything the perturbation engine reads from disk.
struct PerturbTables {
  ConfusableTable confusables;
  HomophoneDictionary homophones;
  // Prompt used to ask a model for a perturbed rewrite.
  std::string rewrite_template;
};

// ROP_DATA_DIR from the environment, else the compiled-in data directory.
std::string default_data_dir();

// Loads confusables.tsv, homophones.tsv and prompts/perturb_rewrite.txt.
PerturbTables load_tables(const std::string& data_dir = default_data_dir());

}  // namespace rop::perturb

#endif  // ROP_PERTURB_TABLES_H_
