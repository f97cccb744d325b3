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

#include "legsim/toml.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Strips a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::vector<std::string> split_dotted(const std::string& name, int line_no) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : name) {
    if (c == '.') {
      if (cur.empty()) throw ConfigError("toml line " + std::to_string(line_no) + ": empty name part");
      parts.push_back(cur);
      cur.clear();
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      cur.push_back(c);
    } else {
      throw ConfigError("toml line " + std::to_string(line_no) + ": bad character in name '" +
                        name + "'");
    }
  }
  if (cur.empty()) throw ConfigError("toml line " + std::to_string(line_no) + ": empty name");
  parts.push_back(cur);
  return parts;
}

TomlValue parse_scalar(const std::string& text, int line_no) {
  TomlValue v;
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    v.kind = TomlValue::Kind::kString;
    std::string out;
    for (size_t i = 1; i + 1 < text.size(); ++i) {
      if (text[i] == '\\' && i + 2 < text.size() && (text[i + 1] == '"' || text[i + 1] == '\\')) {
        out.push_back(text[i + 1]);
        ++i;
      } else {
        out.push_back(text[i]);
      }
    }
    v.str = out;
    return v;
  }
  if (text == "true" || text == "false") {
    v.kind = TomlValue::Kind::kBool;
    v.boolean = text == "true";
    return v;
  }
  char* end = nullptr;
  const double num = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw ConfigError("toml line " + std::to_string(line_no) + ": cannot parse value '" + text +
                      "'");
  }
  v.kind = TomlValue::Kind::kNumber;
  v.number = num;
  return v;
}

TomlValue parse_value(const std::string& text, int line_no) {
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') {
      throw ConfigError("toml line " + std::to_string(line_no) + ": unterminated array");
    }
    TomlValue v;
    v.kind = TomlValue::Kind::kArray;
    const std::string inner = trim(text.substr(1, text.size() - 2));
    if (inner.empty()) return v;
    std::string item;
    bool in_string = false;
    for (size_t i = 0; i <= inner.size(); ++i) {
      const char c = i < inner.size() ? inner[i] : ',';
      if (c == '"' && (i == 0 || inner[i - 1] != '\\')) in_string = !in_string;
      if (c == ',' && !in_string) {
        const std::string t = trim(item);
        if (t.empty()) {
          throw ConfigError("toml line " + std::to_string(line_no) + ": empty array element");
        }
        v.array.push_back(parse_scalar(t, line_no));
        item.clear();
      } else {
        item.push_back(c);
      }
    }
    return v;
  }
  return parse_scalar(text, line_no);
}

TomlTable* descend(TomlTable* root, const std::vector<std::string>& parts, size_t upto) {
  TomlTable* t = root;
  for (size_t i = 0; i < upto; ++i) t = &t->tables[parts[i]];
  return t;
}

void serialize_table(const TomlTable& t, const std::string& prefix, std::ostringstream& out);

std::string format_value(const TomlValue& v) {
  switch (v.kind) {
    case TomlValue::Kind::kNumber: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", v.number);
      return buf;
    }
    case TomlValue::Kind::kBool:
      return v.boolean ? "true" : "false";
    case TomlValue::Kind::kString: {
      std::string out = "\"";
      for (char c : v.str) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('"');
      return out;
    }
    case TomlValue::Kind::kArray: {
      std::string out = "[";
      for (size_t i = 0; i < v.array.size(); ++i) {
        if (i) out += ", ";
        out += format_value(v.array[i]);
      }
      out += "]";
      return out;
    }
  }
  return "";
}

void serialize_table(const TomlTable& t, const std::string& prefix, std::ostringstream& out) {
  for (const auto& [key, value] : t.values) {
    out << key << " = " << format_value(value) << "\n";
  }
  for (const auto& [key, sub] : t.tables) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    out << "\n[" << name << "]\n";
    serialize_table(sub, name, out);
  }
  for (const auto& [key, arr] : t.table_arrays) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    for (const auto& sub : arr) {
      out << "\n[[" << name << "]]\n";
      serialize_table(sub, name, out);
    }
  }
}

void collect_keys(const TomlTable& t, const std::string& prefix, std::vector<std::string>& out) {
  for (const auto& [key, value] : t.values) {
    out.push_back(prefix.empty() ? key : prefix + "." + key);
  }
  for (const auto& [key, sub] : t.tables) {
    collect_keys(sub, prefix.empty() ? key : prefix + "." + key, out);
  }
  for (const auto& [key, arr] : t.table_arrays) {
    for (size_t i = 0; i < arr.size(); ++i) {
      collect_keys(arr[i], (prefix.empty() ? key : prefix + "." + key) + "[" + std::to_string(i) + "]",
                   out);
    }
  }
}

}  // namespace

TomlTable toml_parse(const std::string& text) {
  TomlTable root;
  TomlTable* current = &root;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool is_array = line.size() > 1 && line[1] == '[';
      const std::string closer = is_array ? "]]" : "]";
      if (line.substr(line.size() - closer.size()) != closer) {
        throw ConfigError("toml line " + std::to_string(line_no) + ": malformed section header");
      }
      const std::string name =
          trim(line.substr(is_array ? 2 : 1, line.size() - 2 * (is_array ? 2 : 1)));
      const auto parts = split_dotted(name, line_no);
      TomlTable* parent = descend(&root, parts, parts.size() - 1);
      if (is_array) {
        parent->table_arrays[parts.back()].emplace_back();
        current = &parent->table_arrays[parts.back()].back();
      } else {
        if (parent->tables.count(parts.back())) {
          throw ConfigError("toml line " + std::to_string(line_no) + ": duplicate section [" +
                            name + "]");
        }
        current = &parent->tables[parts.back()];
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("toml line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("toml line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto parts = split_dotted(key, line_no);
    if (parts.size() != 1) {
      throw ConfigError("toml line " + std::to_string(line_no) + ": dotted keys not supported");
    }
    if (current->values.count(key)) {
      throw ConfigError("toml line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    current->values[key] = parse_value(value, line_no);
  }
  return root;
}

TomlTable toml_parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return toml_parse(ss.str());
}

std::string toml_serialize(const TomlTable& table) {
  std::ostringstream out;
  serialize_table(table, "", out);
  return out.str();
}

TomlTable TomlReader::empty_;

bool TomlReader::has(const std::string& key) const { return table_->values.count(key) > 0; }
bool TomlReader::has_table(const std::string& key) const { return table_->tables.count(key) > 0; }

double TomlReader::number(const std::string& key) {
  auto it = table_->values.find(key);
  if (it == table_->values.end() || it->second.kind != TomlValue::Kind::kNumber) {
    throw ConfigError("config: missing or non-numeric key '" + path_ + key + "'");
  }
  const double v = it->second.number;
  table_->values.erase(it);
  return v;
}

double TomlReader::number_or(const std::string& key, double fallback) {
  return has(key) ? number(key) : fallback;
}

bool TomlReader::boolean_or(const std::string& key, bool fallback) {
  auto it = table_->values.find(key);
  if (it == table_->values.end()) return fallback;
  if (it->second.kind != TomlValue::Kind::kBool) {
    throw ConfigError("config: key '" + path_ + key + "' must be true/false");
  }
  const bool v = it->second.boolean;
  table_->values.erase(it);
  return v;
}

std::string TomlReader::string(const std::string& key) {
  auto it = table_->values.find(key);
  if (it == table_->values.end() || it->second.kind != TomlValue::Kind::kString) {
    throw ConfigError("config: missing or non-string key '" + path_ + key + "'");
  }
  const std::string v = it->second.str;
  table_->values.erase(it);
  return v;
}

std::string TomlReader::string_or(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

std::vector<double> TomlReader::number_array(const std::string& key) {
  auto it = table_->values.find(key);
  if (it == table_->values.end() || it->second.kind != TomlValue::Kind::kArray) {
    throw ConfigError("config: missing or non-array key '" + path_ + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : it->second.array) {
    if (v.kind != TomlValue::Kind::kNumber) {
      throw ConfigError("config: array '" + path_ + key + "' must be numeric");
    }
    out.push_back(v.number);
  }
  table_->values.erase(it);
  return out;
}

std::vector<double> TomlReader::number_array_or(const std::string& key,
                                                std::vector<double> fallback) {
  return has(key) ? number_array(key) : fallback;
}

TomlReader TomlReader::table(const std::string& key) {
  auto it = table_->tables.find(key);
  if (it == table_->tables.end()) {
    throw ConfigError("config: missing section [" + path_ + key + "]");
  }
  return TomlReader(it->second, path_ + key + ".");
}

TomlReader TomlReader::table_or_empty(const std::string& key) {
  auto it = table_->tables.find(key);
  if (it == table_->tables.end()) return TomlReader(empty_, path_ + key + ".");
  return TomlReader(it->second, path_ + key + ".");
}

std::vector<TomlReader> TomlReader::table_array(const std::string& key) {
  auto it = table_->table_arrays.find(key);
  if (it == table_->table_arrays.end() || it->second.empty()) {
    throw ConfigError("config: missing [[" + path_ + key + "]] entries");
  }
  std::vector<TomlReader> out;
  for (size_t i = 0; i < it->second.size(); ++i) {
    out.emplace_back(it->second[i], path_ + key + "[" + std::to_string(i) + "].");
  }
  return out;
}

std::vector<TomlReader> TomlReader::table_array_or_empty(const std::string& key) {
  auto it = table_->table_arrays.find(key);
  if (it == table_->table_arrays.end()) return {};
  std::vector<TomlReader> out;
  for (size_t i = 0; i < it->second.size(); ++i) {
    out.emplace_back(it->second[i], path_ + key + "[" + std::to_string(i) + "].");
  }
  return out;
}

void TomlReader::finish() const {
  // Sections fully drained by their readers are fine; anything else is an
  // unknown key.
  TomlTable pruned = *table_;
  std::vector<std::string> leftovers;
  collect_keys(pruned, path_.empty() ? "" : path_.substr(0, path_.size() - 1), leftovers);
  if (!leftovers.empty()) {
    std::string msg = "config: unknown keys:";
    for (const auto& k : leftovers) msg += " " + k;
    throw ConfigError(msg);
  }
}

}  // namespace legsim
