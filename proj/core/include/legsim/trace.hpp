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

// Uniformly sampled, named time-series columns for one scenario run, with
// full-precision CSV emit/parse. Emission is byte-deterministic.

#ifndef LEGSIM_TRACE_HPP_
#define LEGSIM_TRACE_HPP_

#include <string>
#include <vector>

namespace legsim {

class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  size_t rows() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  void add_row(const std::vector<double>& row);
  const std::vector<double>& row(size_t i) const { return data_[i]; }

  int column_index(const std::string& name) const;  // -1 when absent
  std::vector<double> column(const std::string& name) const;
  double at(size_t row, const std::string& name) const;

  // All values finite and the time column strictly uniform.
  void check_consistency() const;

  std::string to_csv() const;
  static Trace from_csv_text(const std::string& text);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> data_;
};

// Writes the CSV; surfaces I/O failures with the path in the message.
void emit_trace(const Trace& trace, const std::string& path);

// CSV plus a sidecar <path minus .csv>.meta.toml echoing the resolved
// scenario configuration.
void emit_trace(const Trace& trace, const std::string& path, const std::string& sidecar_toml);

Trace parse_trace_file(const std::string& path);

}  // namespace legsim

#endif  // LEGSIM_TRACE_HPP_
