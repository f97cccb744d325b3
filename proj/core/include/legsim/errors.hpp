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

#ifndef LEGSIM_ERRORS_HPP_
#define LEGSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace legsim {

// Bad scenario/config input (file syntax, unknown keys, invalid values).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested foot target outside the reachable annulus.
class WorkspaceError : public std::runtime_error {
 public:
  WorkspaceError(const std::string& msg, double r, double r_min, double r_max)
      : std::runtime_error(msg), r_requested(r), r_min(r_min), r_max(r_max) {}
  double r_requested;
  double r_min;
  double r_max;
};

// Numerical failure during simulation (non-finite state, blown-up integration).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace legsim

#endif  // LEGSIM_ERRORS_HPP_
