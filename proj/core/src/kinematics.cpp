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

#include "legsim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

// Unit vector at angle a from the downward vertical, and its derivative.
Vec2 unit(double a) { return {std::sin(a), std::cos(a)}; }
Vec2 unit_d(double a) { return {std::cos(a), -std::sin(a)}; }

}  // namespace

double LegGeometry::r_min() const { return std::fabs(l1 - l2); }
double LegGeometry::r_max() const { return l1 + l2; }

void LegGeometry::validate() const {
  if (l1 <= 0.0 || l2 <= 0.0) throw ConfigError("geometry: link lengths must be > 0");
  if (knee_sign != 1 && knee_sign != -1) throw ConfigError("geometry: knee_sign must be +1 or -1");
}

FootState FootState::from_cartesian(const Vec2& x, const Vec2& xdot) {
  FootState f;
  f.x = x;
  f.xdot = xdot;
  f.r = x.norm();
  f.rdot = f.r > 0.0 ? x.dot(xdot) / f.r : 0.0;
  return f;
}

Vec2 forward_kinematics(double theta_hip, double theta_knee, const LegGeometry& g) {
  const double shank = theta_hip + g.knee_sign * theta_knee;
  return g.l1 * unit(theta_hip) + g.l2 * unit(shank);
}

JointAngles inverse_kinematics(const Vec2& x, const LegGeometry& g) {
  const double r = x.norm();
  const double slack = 1e-9;
  if (r < g.r_min() - slack || r > g.r_max() + slack) {
    std::ostringstream msg;
    msg << "inverse_kinematics: target radius " << r << " outside reachable annulus ["
        << g.r_min() << ", " << g.r_max() << "]";
    throw WorkspaceError(msg.str(), r, g.r_min(), g.r_max());
  }
  const double cos_knee =
      std::clamp((r * r - g.l1 * g.l1 - g.l2 * g.l2) / (2.0 * g.l1 * g.l2), -1.0, 1.0);
  const double knee = std::acos(cos_knee);
  const double beta = std::atan2(x.x, x.z);
  const double gamma = std::atan2(g.l2 * std::sin(knee), g.l1 + g.l2 * cos_knee);
  JointAngles q;
  q.knee = knee;
  q.hip = beta - g.knee_sign * gamma;
  return q;
}

Mat2 jacobian(double theta_hip, double theta_knee, const LegGeometry& g) {
  const double s = static_cast<double>(g.knee_sign);
  const double shank = theta_hip + s * theta_knee;
  const Vec2 dthigh = unit_d(theta_hip);
  const Vec2 dshank = unit_d(shank);
  const Vec2 c0 = g.l1 * dthigh + g.l2 * dshank;
  const Vec2 c1 = s * g.l2 * dshank;
  return {c0.x, c1.x, c0.z, c1.z};
}

Mat2 jacobian_dot(double theta_hip, double theta_knee, double omega_hip,
                  double omega_knee, const LegGeometry& g) {
  const double s = static_cast<double>(g.knee_sign);
  const double shank = theta_hip + s * theta_knee;
  const double shank_rate = omega_hip + s * omega_knee;
  // d/dt unit'(a) = -unit(a) * adot
  const Vec2 c0 = -g.l1 * omega_hip * unit(theta_hip) - g.l2 * shank_rate * unit(shank);
  const Vec2 c1 = -s * g.l2 * shank_rate * unit(shank);
  return {c0.x, c1.x, c0.z, c1.z};
}

RadialError radial_error(const FootState& desired, const FootState& actual) {
  return {desired.r - actual.r, desired.rdot - actual.rdot};
}

}  // namespace legsim
