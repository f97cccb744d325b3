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

#include "legsim/trace.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "legsim/errors.hpp"

namespace legsim {

void Trace::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("trace: row width does not match column count");
  }
  data_.push_back(row);
}

int Trace::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> Trace::column(const std::string& name) const {
  const int idx = column_index(name);
  if (idx < 0) throw std::invalid_argument("trace: no column named " + name);
  std::vector<double> out;
  out.reserve(data_.size());
  for (const auto& row : data_) out.push_back(row[idx]);
  return out;
}

double Trace::at(size_t row, const std::string& name) const {
  const int idx = column_index(name);
  if (idx < 0) throw std::invalid_argument("trace: no column named " + name);
  return data_[row][idx];
}

void Trace::check_consistency() const {
  for (const auto& row : data_) {
    for (double v : row) {
      if (!std::isfinite(v)) throw NumericError("trace: non-finite sample");
    }
  }
  const int t = column_index("t");
  if (t >= 0 && data_.size() >= 3) {
    const double period = data_[1][t] - data_[0][t];
    for (size_t i = 2; i < data_.size(); ++i) {
      const double dt = data_[i][t] - data_[i - 1][t];
      if (std::fabs(dt - period) > 1e-9 * std::fmax(1.0, std::fabs(period))) {
        throw NumericError("trace: non-uniform sample period");
      }
    }
  }
}

std::string Trace::to_csv() const {
  std::ostringstream out;
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) out << ",";
    out << columns_[i];
  }
  out << "\n";
  char buf[64];
  for (const auto& row : data_) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

Trace Trace::from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace csv: empty input");

  std::vector<std::string> cols;
  std::string item;
  std::istringstream header(line);
  while (std::getline(header, item, ',')) cols.push_back(item);
  Trace trace(cols);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(cols.size());
    std::istringstream ss(line);
    while (std::getline(ss, item, ',')) row.push_back(std::strtod(item.c_str(), nullptr));
    trace.add_row(row);
  }
  return trace;
}

void emit_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_trace: cannot open " + path);
  out << trace.to_csv();
  if (!out) throw std::runtime_error("emit_trace: write failed for " + path);
}

void emit_trace(const Trace& trace, const std::string& path, const std::string& sidecar_toml) {
  emit_trace(trace, path);
  std::string meta = path;
  const size_t dot = meta.rfind(".csv");
  if (dot != std::string::npos && dot == meta.size() - 4) meta = meta.substr(0, dot);
  meta += ".meta.toml";
  std::ofstream out(meta, std::ios::binary);
  if (!out) throw std::runtime_error("emit_trace: cannot open " + meta);
  out << sidecar_toml;
  if (!out) throw std::runtime_error("emit_trace: write failed for " + meta);
}

Trace parse_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("parse_trace_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return Trace::from_csv_text(ss.str());
}

}  // namespace legsim
