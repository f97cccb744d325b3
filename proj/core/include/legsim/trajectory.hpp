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

// Reference generation: gait-style swing/stance foot trajectories with
// consistent position/velocity/acceleration, radial sinusoids, fixed holds,
// and the feed-forward impulse profile used by the impact experiments.

#ifndef LEGSIM_TRAJECTORY_HPP_
#define LEGSIM_TRAJECTORY_HPP_

#include "legsim/control.hpp"
#include "legsim/kinematics.hpp"
#include "legsim/vec2.hpp"

namespace legsim {

struct GaitParams {
  double step_length = 0.12;   // [m]
  double step_height = 0.05;   // [m]
  double cycle_time = 0.5;     // [s]
  double duty_factor = 0.5;    // stance fraction in (0, 1)
  double stance_depth = 0.27;  // nominal radial distance [m]

  void validate() const;
};

struct ReferenceSample {
  Vec2 x_des;          // foot position [m]
  Vec2 xdot_des;       // foot velocity [m/s]
  Joint2 alpha_ref{};  // joint accelerations [rad/s^2]
  Phase phase = Phase::kSwing;
};

// Maps an analytic Cartesian reference (x, xd, xdd) to a ReferenceSample with
// joint accelerations alpha = J^-1 (xdd - Jdot qdot). Requires the target
// off the Jacobian singularities.
ReferenceSample reference_from_cartesian(const Vec2& x, const Vec2& xd, const Vec2& xdd,
                                         Phase phase, const LegGeometry& geom);

// Periodic gait trajectory: stance sweeps the foot backward at constant
// depth; swing returns it along a cycloid with a squared-half-sine lift.
// Velocity is continuous across phase boundaries. Workspace violations are
// rejected at construction.
class CpgTrajectory {
 public:
  CpgTrajectory(const GaitParams& gait, const LegGeometry& geom);
  ReferenceSample sample(double t) const;
  const GaitParams& gait() const { return gait_; }

 private:
  void cartesian(double t, Vec2& x, Vec2& xd, Vec2& xdd, Phase& phase) const;

  GaitParams gait_;
  LegGeometry geom_;
};

// Radial sinusoid at a fixed leg azimuth: r(t) = center + A sin(2 pi f t).
class SinusoidTrajectory {
 public:
  SinusoidTrajectory(double amplitude, double freq_hz, double center, double azimuth,
                     const LegGeometry& geom);
  ReferenceSample sample(double t) const;

 private:
  double amplitude_;
  double omega_;
  double center_;
  double azimuth_;
  LegGeometry geom_;
};

// Constant foot target (standing posture).
class HoldTrajectory {
 public:
  HoldTrajectory(const Vec2& target, const LegGeometry& geom);
  ReferenceSample sample(double t) const;
  const Vec2& target() const { return target_; }

 private:
  Vec2 target_;
  LegGeometry geom_;
};

enum class ImpulseShape { kHalfSine, kRectangular };

// Vertical feed-forward force pulse: zero outside [0, duration].
double impulse_profile(double t, double peak, double duration,
                       ImpulseShape shape = ImpulseShape::kHalfSine);

}  // namespace legsim

#endif  // LEGSIM_TRAJECTORY_HPP_
