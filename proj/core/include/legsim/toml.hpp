// Copyright 2026 The legsim Authors
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

// Minimal TOML subset for scenario files: [section] and [[array-of-table]]
// headers with dotted names, `key = value` pairs with strings, numbers,
// booleans and single-line scalar arrays, and # comments. Scenario loading
// treats unconsumed keys as errors, so the reader erases what it hands out.

#ifndef LEGSIM_TOML_HPP_
#define LEGSIM_TOML_HPP_

#include <map>
#include <string>
#include <vector>

namespace legsim {

struct TomlValue {
  enum class Kind { kNumber, kBool, kString, kArray };
  Kind kind = Kind::kNumber;
  double number = 0.0;
  bool boolean = false;
  std::string str;
  std::vector<TomlValue> array;
};

struct TomlTable {
  std::map<std::string, TomlValue> values;
  std::map<std::string, TomlTable> tables;
  std::map<std::string, std::vector<TomlTable>> table_arrays;

  bool empty() const { return values.empty() && tables.empty() && table_arrays.empty(); }
};

TomlTable toml_parse(const std::string& text);
TomlTable toml_parse_file(const std::string& path);
std::string toml_serialize(const TomlTable& table);

// Destructive accessor: every get erases the key, so whatever remains after
// loading is by definition unknown to the schema.
class TomlReader {
 public:
  explicit TomlReader(TomlTable& table, std::string path = "") : table_(&table), path_(std::move(path)) {}

  bool has(const std::string& key) const;
  bool has_table(const std::string& key) const;

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  bool boolean_or(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string_or(const std::string& key, const std::string& fallback);
  std::vector<double> number_array(const std::string& key);
  std::vector<double> number_array_or(const std::string& key, std::vector<double> fallback);

  // Sub-table readers. `table` throws when missing; `table_or_empty` yields a
  // reader over an empty table so defaults apply.
  TomlReader table(const std::string& key);
  TomlReader table_or_empty(const std::string& key);
  std::vector<TomlReader> table_array(const std::string& key);
  std::vector<TomlReader> table_array_or_empty(const std::string& key);

  // Throws ConfigError listing every key not consumed by the schema.
  void finish() const;

  const std::string& path() const { return path_; }

 private:
  TomlTable* table_;
  std::string path_;
  static TomlTable empty_;
};

}  // namespace legsim

#endif  // LEGSIM_TOML_HPP_
