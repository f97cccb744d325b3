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

#include "legsim/trajectory.hpp"

#include <cmath>

#include <doctest.h>

#include "legsim/errors.hpp"
#include "oracles.hpp"

using namespace legsim;

namespace {
const LegGeometry kGeom{};
GaitParams default_gait() { return GaitParams{}; }
}  // namespace

TEST_CASE("cpg trajectory: periodicity and mid-swing height") {
  const GaitParams gait = default_gait();
  CpgTrajectory traj(gait, kGeom);

  const ReferenceSample a = traj.sample(0.0);
  const ReferenceSample b = traj.sample(gait.cycle_time);
  CHECK(a.x_des.x == doctest::Approx(b.x_des.x).epsilon(1e-12));
  CHECK(a.x_des.z == doctest::Approx(b.x_des.z).epsilon(1e-12));
  CHECK(a.xdot_des.x == doctest::Approx(b.xdot_des.x).epsilon(1e-9));

  // Mid-swing: the foot is step_height above stance depth.
  const double t_mid = gait.cycle_time * gait.duty_factor +
                       0.5 * gait.cycle_time * (1.0 - gait.duty_factor);
  const ReferenceSample mid = traj.sample(t_mid);
  CHECK(mid.x_des.z == doctest::Approx(gait.stance_depth - gait.step_height).epsilon(1e-12));
  CHECK(mid.phase == Phase::kSwing);
  CHECK(a.phase == Phase::kStance);
}

TEST_CASE("cpg trajectory: velocity matches differentiated position") {
  CpgTrajectory traj(default_gait(), kGeom);
  const double h = 1e-5;
  for (double t : {0.05, 0.2, 0.26, 0.3, 0.37, 0.45, 0.49}) {
    const ReferenceSample plus = traj.sample(t + h);
    const ReferenceSample minus = traj.sample(t - h);
    const ReferenceSample mid = traj.sample(t);
    const double vx = (plus.x_des.x - minus.x_des.x) / (2 * h);
    const double vz = (plus.x_des.z - minus.x_des.z) / (2 * h);
    CHECK(std::fabs(vx - mid.xdot_des.x) < 1e-6 + 1e-4 * std::fabs(mid.xdot_des.x));
    CHECK(std::fabs(vz - mid.xdot_des.z) < 1e-6 + 1e-4 * std::fabs(mid.xdot_des.z));
  }
}

TEST_CASE("cpg trajectory: C1 continuity across phase boundaries") {
  const GaitParams gait = default_gait();
  CpgTrajectory traj(gait, kGeom);
  const double eps = 1e-12;
  for (double boundary : {gait.cycle_time * gait.duty_factor, gait.cycle_time}) {
    const ReferenceSample before = traj.sample(boundary - eps);
    const ReferenceSample after = traj.sample(boundary + eps);
    CHECK(std::fabs(before.xdot_des.x - after.xdot_des.x) < 1e-9);
    CHECK(std::fabs(before.xdot_des.z - after.xdot_des.z) < 1e-9);
  }
}

TEST_CASE("cpg trajectory: whole path stays inside the safe annulus") {
  const GaitParams gait = default_gait();
  CpgTrajectory traj(gait, kGeom);
  for (int i = 0; i <= 5000; ++i) {
    const double r = traj.sample(gait.cycle_time * i / 5000.0).x_des.norm();
    CHECK(r >= kGeom.r_min() + 5e-3 - 1e-12);
    CHECK(r <= kGeom.r_max() - 5e-3 + 1e-12);
  }

  GaitParams bad = gait;
  bad.stance_depth = 0.35;  // full extension
  CHECK_THROWS_AS(CpgTrajectory(bad, kGeom), ConfigError);
}

TEST_CASE("cpg trajectory: joint accelerations match differentiated joint rates") {
  CpgTrajectory traj(default_gait(), kGeom);
  const double h = 1e-5;
  auto joint_rates = [&](double t) {
    const ReferenceSample s = traj.sample(t);
    const JointAngles q = inverse_kinematics(s.x_des, kGeom);
    const Mat2 J = jacobian(q.hip, q.knee, kGeom);
    return J.inverse() * s.xdot_des;
  };
  for (double t : {0.1, 0.3, 0.4}) {
    const Vec2 fd = (joint_rates(t + h) - joint_rates(t - h)) * (1.0 / (2 * h));
    const ReferenceSample s = traj.sample(t);
    CHECK(std::fabs(fd.x - s.alpha_ref[kHip]) < 1e-3 * (std::fabs(s.alpha_ref[kHip]) + 1.0));
    CHECK(std::fabs(fd.z - s.alpha_ref[kKnee]) < 1e-3 * (std::fabs(s.alpha_ref[kKnee]) + 1.0));
  }
}

TEST_CASE("radial sinusoid: phase values and harmonic identity") {
  const double A = 0.03, f = 1.0, c = 0.28;
  SinusoidTrajectory traj(A, f, c, 0.0, kGeom);

  const ReferenceSample t0 = traj.sample(0.0);
  CHECK(t0.x_des.norm() == doctest::Approx(c).epsilon(1e-12));
  CHECK(t0.xdot_des.norm() == doctest::Approx(A * 2.0 * M_PI * f).epsilon(1e-12));

  const ReferenceSample quarter = traj.sample(0.25 / f);
  CHECK(quarter.x_des.norm() == doctest::Approx(c + A).epsilon(1e-9));
  CHECK(quarter.xdot_des.norm() == doctest::Approx(0.0).epsilon(1e-9));

  // Acceleration is -(2 pi f)^2 (r - c) everywhere: differentiate the
  // velocity numerically.
  const double h = 1e-6;
  for (double t : {0.05, 0.13, 0.31, 0.47}) {
    const Vec2 accel_fd =
        (traj.sample(t + h).xdot_des - traj.sample(t - h).xdot_des) * (1.0 / (2 * h));
    const double r = traj.sample(t).x_des.norm();
    const double expected = -std::pow(2.0 * M_PI * f, 2) * (r - c);
    CHECK(accel_fd.z == doctest::Approx(expected * traj.sample(t).x_des.z / r).epsilon(1e-4));
  }

  CHECK_THROWS_AS(SinusoidTrajectory(0.2, 1.0, 0.28, 0.0, kGeom), ConfigError);
}

TEST_CASE("impulse profile: half sine and rectangle") {
  CHECK(impulse_profile(0.1, 200.0, 0.2) == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(impulse_profile(-0.01, 200.0, 0.2) == 0.0);
  CHECK(impulse_profile(0.21, 200.0, 0.2) == 0.0);
  CHECK(impulse_profile(0.05, 500.0, 0.2, ImpulseShape::kRectangular) == 500.0);

  const double integral = test::adaptive_simpson(
      [](double t) { return impulse_profile(t, 200.0, 0.2); }, 0.0, 0.2, 1e-12);
  CHECK(integral == doctest::Approx(200.0 * 0.2 * 2.0 / M_PI).epsilon(1e-9));

  CHECK_THROWS_AS(impulse_profile(0.0, -1.0, 0.2), std::invalid_argument);
}

TEST_CASE("hold trajectory pins the target with zero derivatives") {
  HoldTrajectory traj(Vec2{0.0, 0.28}, kGeom);
  const ReferenceSample s = traj.sample(3.0);
  CHECK(s.x_des.z == doctest::Approx(0.28));
  CHECK(s.xdot_des.norm() == 0.0);
  CHECK(s.alpha_ref[kHip] == doctest::Approx(0.0));
  CHECK(s.alpha_ref[kKnee] == doctest::Approx(0.0));
}
