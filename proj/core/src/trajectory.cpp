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
#include <sstream>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kWorkspaceMargin = 5e-3;  // [m]

void check_radius(double r, const LegGeometry& geom, const char* what) {
  const double lo = geom.r_min() + kWorkspaceMargin;
  const double hi = geom.r_max() - kWorkspaceMargin;
  if (r < lo || r > hi) {
    std::ostringstream msg;
    msg << what << ": reference radius " << r << " outside safe annulus [" << lo << ", " << hi
        << "]";
    throw ConfigError(msg.str());
  }
}

}  // namespace

void GaitParams::validate() const {
  if (step_length <= 0.0 || step_height <= 0.0 || cycle_time <= 0.0 || stance_depth <= 0.0) {
    throw ConfigError("gait: step_length, step_height, cycle_time, stance_depth must be > 0");
  }
  if (duty_factor <= 0.0 || duty_factor >= 1.0) {
    throw ConfigError("gait: duty_factor must be in (0, 1)");
  }
}

ReferenceSample reference_from_cartesian(const Vec2& x, const Vec2& xd, const Vec2& xdd,
                                         Phase phase, const LegGeometry& geom) {
  const JointAngles q = inverse_kinematics(x, geom);
  const Mat2 J = jacobian(q.hip, q.knee, geom);
  if (std::fabs(J.det()) < 1e-9) {
    throw NumericError("reference_from_cartesian: reference at a Jacobian singularity");
  }
  const Mat2 Jinv = J.inverse();
  const Vec2 qd = Jinv * xd;
  const Mat2 Jdot = jacobian_dot(q.hip, q.knee, qd.x, qd.z, geom);
  const Vec2 alpha = Jinv * (xdd - Jdot * qd);

  ReferenceSample s;
  s.x_des = x;
  s.xdot_des = xd;
  s.alpha_ref = {alpha.x, alpha.z};
  s.phase = phase;
  return s;
}

CpgTrajectory::CpgTrajectory(const GaitParams& gait, const LegGeometry& geom)
    : gait_(gait), geom_(geom) {
  gait_.validate();
  geom_.validate();
  // Reject any cycle that leaves the safe annulus before running.
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    Vec2 x, xd, xdd;
    Phase phase;
    cartesian(gait_.cycle_time * i / n, x, xd, xdd, phase);
    check_radius(x.norm(), geom_, "cpg trajectory");
  }
}

void CpgTrajectory::cartesian(double t, Vec2& x, Vec2& xd, Vec2& xdd, Phase& phase) const {
  const double T = gait_.cycle_time;
  const double T_st = gait_.duty_factor * T;
  const double T_sw = T - T_st;
  const double L = gait_.step_length;
  const double H = gait_.step_height;
  const double depth = gait_.stance_depth;
  const double v_st = L / T_st;

  double tc = std::fmod(t, T);
  if (tc < 0.0) tc += T;

  if (tc < T_st) {
    // Stance: straight backward sweep at constant depth.
    x = {L / 2.0 - v_st * tc, depth};
    xd = {-v_st, 0.0};
    xdd = {0.0, 0.0};
    phase = Phase::kStance;
    return;
  }

  // Swing: cycloid-style return whose boundary velocity matches the stance
  // sweep, with a squared-half-sine lift.
  const double sigma = (tc - T_st) / T_sw;
  const double two_pi_s = 2.0 * kPi * sigma;
  const double amp = L + v_st * T_sw;

  const double fx = -L / 2.0 + L * sigma - amp * std::sin(two_pi_s) / (2.0 * kPi);
  const double dfx = L - amp * std::cos(two_pi_s);
  const double ddfx = amp * 2.0 * kPi * std::sin(two_pi_s);

  const double fz = depth - H * 0.5 * (1.0 - std::cos(two_pi_s));
  const double dfz = -H * kPi * std::sin(two_pi_s);
  const double ddfz = -H * 2.0 * kPi * kPi * std::cos(two_pi_s);

  x = {fx, fz};
  xd = {dfx / T_sw, dfz / T_sw};
  xdd = {ddfx / (T_sw * T_sw), ddfz / (T_sw * T_sw)};
  phase = Phase::kSwing;
}

ReferenceSample CpgTrajectory::sample(double t) const {
  if (t < 0.0) throw std::invalid_argument("cpg sample: t must be >= 0");
  Vec2 x, xd, xdd;
  Phase phase;
  cartesian(t, x, xd, xdd, phase);
  return reference_from_cartesian(x, xd, xdd, phase, geom_);
}

SinusoidTrajectory::SinusoidTrajectory(double amplitude, double freq_hz, double center,
                                       double azimuth, const LegGeometry& geom)
    : amplitude_(amplitude),
      omega_(2.0 * kPi * freq_hz),
      center_(center),
      azimuth_(azimuth),
      geom_(geom) {
  geom_.validate();
  if (amplitude < 0.0 || freq_hz <= 0.0) {
    throw ConfigError("sinusoid: amplitude must be >= 0 and frequency > 0");
  }
  check_radius(center - amplitude, geom_, "sinusoid trajectory");
  check_radius(center + amplitude, geom_, "sinusoid trajectory");
}

ReferenceSample SinusoidTrajectory::sample(double t) const {
  const Vec2 u{std::sin(azimuth_), std::cos(azimuth_)};
  const double r = center_ + amplitude_ * std::sin(omega_ * t);
  const double rd = amplitude_ * omega_ * std::cos(omega_ * t);
  const double rdd = -amplitude_ * omega_ * omega_ * std::sin(omega_ * t);
  return reference_from_cartesian(r * u, rd * u, rdd * u, Phase::kSwing, geom_);
}

HoldTrajectory::HoldTrajectory(const Vec2& target, const LegGeometry& geom)
    : target_(target), geom_(geom) {
  geom_.validate();
  check_radius(target.norm(), geom_, "hold trajectory");
}

ReferenceSample HoldTrajectory::sample(double /*t*/) const {
  return reference_from_cartesian(target_, Vec2{}, Vec2{}, Phase::kStance, geom_);
}

double impulse_profile(double t, double peak, double duration, ImpulseShape shape) {
  if (peak <= 0.0 || duration <= 0.0) {
    throw std::invalid_argument("impulse_profile: peak and duration must be > 0");
  }
  if (t < 0.0 || t > duration) return 0.0;
  if (shape == ImpulseShape::kRectangular) return peak;
  return peak * std::sin(kPi * t / duration);
}

}  // namespace legsim
