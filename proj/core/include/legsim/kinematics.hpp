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

// Two-link planar leg geometry in the sagittal plane.
//
// Frame and angle conventions (used everywhere in the project):
//   - Hip-centered frame, x forward, z downward. A standing foot has z > 0.
//   - theta_hip is measured from the downward vertical, positive forward.
//   - theta_knee is the flexion from the straight leg: 0 = fully extended,
//     pi = fully folded. knee_sign selects the fold direction.

#ifndef LEGSIM_KINEMATICS_HPP_
#define LEGSIM_KINEMATICS_HPP_

#include "legsim/vec2.hpp"

namespace legsim {

struct LegGeometry {
  double l1 = 0.225;   // thigh length [m]
  double l2 = 0.125;   // lower-leg length [m]
  int knee_sign = 1;   // +1 or -1, fold direction of the knee

  double r_min() const;
  double r_max() const;
  void validate() const;
};

struct FootState {
  Vec2 x;      // foot position in the hip frame [m]
  Vec2 xdot;   // foot velocity [m/s]
  double r = 0.0;     // radial distance from the hip [m]
  double rdot = 0.0;  // radial rate [m/s]

  static FootState from_cartesian(const Vec2& x, const Vec2& xdot);
};

struct JointAngles {
  double hip = 0.0;   // [rad]
  double knee = 0.0;  // flexion [rad], in [0, pi]
};

// Foot position for the given joint angles.
Vec2 forward_kinematics(double theta_hip, double theta_knee, const LegGeometry& geom);

// Joint angles reaching the target on the configured knee branch.
// Throws WorkspaceError when the target radius is outside the annulus.
JointAngles inverse_kinematics(const Vec2& x, const LegGeometry& geom);

// 2x2 foot Jacobian: J * qdot = xdot. Singular at full extension/folding.
Mat2 jacobian(double theta_hip, double theta_knee, const LegGeometry& geom);

// Time derivative of the Jacobian at the given configuration and rates.
Mat2 jacobian_dot(double theta_hip, double theta_knee, double omega_hip,
                  double omega_knee, const LegGeometry& geom);

struct RadialError {
  double position = 0.0;  // [m]
  double velocity = 0.0;  // [m/s]
};

// (r_des - r, rdot_des - rdot): the error coordinates the gain schedules use.
RadialError radial_error(const FootState& desired, const FootState& actual);

}  // namespace legsim

#endif  // LEGSIM_KINEMATICS_HPP_
