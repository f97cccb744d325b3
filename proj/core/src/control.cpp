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

#include "legsim/control.hpp"

#include <cmath>
#include <stdexcept>

#include "legsim/errors.hpp"

namespace legsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoOverSqrtPi = 1.1283791670955126;
}  // namespace

void PiGains::validate() const {
  if (K_p < 0.0 || K_i < 0.0) throw ConfigError("gains: K_p and K_i must be >= 0");
  if (filter_cutoff_hz <= 0.0) throw ConfigError("gains: filter_cutoff_hz must be > 0");
  if (rate_hz <= 0.0 || outer_rate_hz <= 0.0) throw ConfigError("gains: rates must be > 0");
  const double ratio = rate_hz / outer_rate_hz;
  if (std::fabs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
    throw ConfigError("gains: outer rate must divide inner rate");
  }
}

void GainSchedule::validate() const {
  if (K_vs1 <= 0.0) throw ConfigError("schedule: K_vs1 must be > 0");
  if (K_vs2 < 0.0) throw ConfigError("schedule: K_vs2 must be >= 0");
  if (K_d1 <= 0.0) throw ConfigError("schedule: K_d1 must be > 0");
  if (K_d2 < 0.0) throw ConfigError("schedule: K_d2 must be >= 0");
  if (K_cv <= 0.0) throw ConfigError("schedule: K_cv must be > 0");
  if (K_cd <= 0.0) throw ConfigError("schedule: K_cd must be > 0");
}

void SegmentDynamics::validate() const {
  if (m1 < 0.0 || m2 < 0.0) throw ConfigError("dynamics: masses must be >= 0");
  if (c1 < 0.0 || c2 < 0.0) throw ConfigError("dynamics: centroid offsets must be >= 0");
  if (gravity < 0.0) throw ConfigError("dynamics: gravity must be >= 0");
}

double pi_torque_step(double tau_ref, double current_measured, const PiGains& gains,
                      PiState& st, const PlantParams& params) {
  const double Ts = 1.0 / gains.rate_hz;
  const double current_ref = tau_ref / params.K_I;
  const double e = current_ref - current_measured;

  // Conditional integration: hold the integrator while the output is pinned
  // at the limit and the error would push it further in.
  const bool freeze = st.saturated && e * st.filter_state > 0.0;
  if (!freeze) st.integrator += gains.K_i * Ts * e;

  const double pre_filter = params.K_I * (gains.K_p * e + st.integrator);
  const double alpha = 1.0 - std::exp(-2.0 * kPi * gains.filter_cutoff_hz * Ts);
  st.filter_state += alpha * (pre_filter - st.filter_state);

  double out = st.filter_state;
  if (out > params.tau_max) {
    out = params.tau_max;
    st.saturated = true;
  } else if (out < -params.tau_max) {
    out = -params.tau_max;
    st.saturated = true;
  } else {
    st.saturated = false;
  }
  return out;
}

double joint_feedforward(double alpha_ref, double omega_m, double omega_l_hat,
                         const PlantParams& p) {
  return (p.J_m + p.J_l) * alpha_ref + friction_torque(omega_m, p.tau_cfm, p.B_m, p.eps_v) +
         friction_torque(omega_l_hat, p.tau_cfl, p.B_l, p.eps_v);
}

Joint2 gravity_torque(const JointAngles& q, const LegGeometry& g, const SegmentDynamics& dyn) {
  const double s = static_cast<double>(g.knee_sign);
  const double shank = q.hip + s * q.knee;
  Joint2 tau{};
  tau[kHip] = dyn.gravity * (dyn.m1 * dyn.c1 * std::sin(q.hip) +
                             dyn.m2 * (g.l1 * std::sin(q.hip) + dyn.c2 * std::sin(shank)));
  tau[kKnee] = dyn.gravity * dyn.m2 * s * dyn.c2 * std::sin(shank);
  return tau;
}

Joint2 coriolis_torque(const JointAngles& q, const Joint2& qdot, const LegGeometry& g,
                       const SegmentDynamics& dyn) {
  const double s = static_cast<double>(g.knee_sign);
  const double q2 = s * q.knee;
  const double q1d = qdot[kHip];
  const double q2d = s * qdot[kKnee];
  const double h = -dyn.m2 * g.l1 * dyn.c2 * std::sin(q2);
  Joint2 tau{};
  tau[kHip] = h * q2d * (2.0 * q1d + q2d);
  tau[kKnee] = s * (-h * q1d * q1d);
  return tau;
}

Joint2 feedforward_torque(const Joint2& alpha_ref, const Joint2& omega_m,
                          const Joint2& omega_l_hat, const JointAngles& q,
                          const Joint2& qdot, const PlantParams& hip,
                          const PlantParams& knee, const LegGeometry& geom,
                          const SegmentDynamics& dyn) {
  const Joint2 tau_g = gravity_torque(q, geom, dyn);
  const Joint2 tau_cor = coriolis_torque(q, qdot, geom, dyn);
  Joint2 tau{};
  tau[kHip] = joint_feedforward(alpha_ref[kHip], omega_m[kHip], omega_l_hat[kHip], hip) +
              tau_cor[kHip] + tau_g[kHip];
  tau[kKnee] = joint_feedforward(alpha_ref[kKnee], omega_m[kKnee], omega_l_hat[kKnee], knee) +
               tau_cor[kKnee] + tau_g[kKnee];
  return tau;
}

double estimate_load_velocity(double omega_m, EstimatorState& st, const PlantParams& p,
                              double dt) {
  if (p.rigid_coupling) {
    st.vel = omega_m;
    st.vel_rate = 0.0;
    return omega_m;
  }
  // Deviation from the held input decays as a damped oscillator with
  // wn^2 = K_w/J_l and 2 zeta wn = B_l/J_l; the update is the exact
  // zero-order-hold solution.
  const double wn = std::sqrt(p.K_w / p.J_l);
  const double zeta = p.B_l / (2.0 * std::sqrt(p.K_w * p.J_l));
  const double e1 = st.vel - omega_m;
  const double e2 = st.vel_rate;

  double e1n, e2n;
  if (zeta < 1.0 - 1e-12) {
    const double sigma = -zeta * wn;
    const double wd = wn * std::sqrt(1.0 - zeta * zeta);
    const double A = e1;
    const double B = (e2 - sigma * e1) / wd;
    const double ex = std::exp(sigma * dt);
    const double cw = std::cos(wd * dt);
    const double sw = std::sin(wd * dt);
    e1n = ex * (A * cw + B * sw);
    e2n = ex * ((sigma * A + wd * B) * cw + (sigma * B - wd * A) * sw);
  } else if (zeta < 1.0 + 1e-12) {
    const double sigma = -wn;
    const double ex = std::exp(sigma * dt);
    const double B = e2 - sigma * e1;
    e1n = ex * (e1 + B * dt);
    e2n = ex * (e2 + sigma * B * dt);
  } else {
    const double root = wn * std::sqrt(zeta * zeta - 1.0);
    const double r1 = -zeta * wn + root;
    const double r2 = -zeta * wn - root;
    const double A = (e2 - r2 * e1) / (r1 - r2);
    const double B = (r1 * e1 - e2) / (r1 - r2);
    const double ex1 = std::exp(r1 * dt);
    const double ex2 = std::exp(r2 * dt);
    e1n = A * ex1 + B * ex2;
    e2n = r1 * A * ex1 + r2 * B * ex2;
  }
  st.vel = omega_m + e1n;
  st.vel_rate = e2n;
  return st.vel;
}

double compensate_wire(double K_des, double K_w_cart) {
  if (K_des >= K_w_cart) {
    throw std::invalid_argument(
        "compensate_wire: desired stiffness must be below the reflected wire stiffness");
  }
  return K_des * K_w_cart / (K_w_cart - K_des);
}

double reflect_wire_stiffness(const Mat2& J, const Vec2& radial_dir, double K_w_joint) {
  const double proj = radial_dir.dot(J.col1());
  const double denom = std::fmax(proj * proj, 1e-12);
  return K_w_joint / denom;
}

double stiffness_schedule(double e, const GainSchedule& s) {
  if (s.mode == ScheduleMode::kLinear) return s.K_vs1;
  return s.K_vs1 + s.K_vs2 / std::cosh(s.K_cv * e);
}

double damping_schedule(double edot, const GainSchedule& s) {
  if (s.mode != ScheduleMode::kNonlinear) return s.K_d1;
  return s.K_d1 + s.K_d2 * (1.0 + erf(-s.K_cd * edot)) / 2.0;
}

double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::fabs(x);
  if (ax >= 4.0) {
    // Leading erfc asymptotic keeps the result strictly inside (-1, 1).
    const double tail = std::exp(-ax * ax) / (ax * std::sqrt(kPi));
    return std::copysign(1.0 - tail, x);
  }
  // Maclaurin series, term ratio -x^2/n.
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x2 / n;
    const double inc = term / (2.0 * n + 1.0);
    sum += inc;
    if (std::fabs(inc) < 1e-17 * std::fabs(sum) + 1e-300) break;
  }
  return kTwoOverSqrtPi * sum;
}

Joint2 compliance_torque(const FootState& x_des, const FootState& x, const Mat2& K_vs_m,
                         const Mat2& K_d_m, const Mat2& J, const Joint2& tau_alpha) {
  const Vec2 f = K_vs_m * (x_des.x - x.x) + K_d_m * (x_des.xdot - x.xdot);
  const Vec2 tau = J.transposed() * f;
  return {tau.x + tau_alpha[kHip], tau.z + tau_alpha[kKnee]};
}

LegController::LegController(const ControllerConfig& config) : cfg_(config) {
  cfg_.gains.validate();
  cfg_.schedule.validate();
  cfg_.hip.validate("hip");
  cfg_.knee.validate("knee");
  cfg_.geometry.validate();
  cfg_.dynamics.validate();
  inner_per_outer_ = static_cast<int>(std::lround(cfg_.gains.rate_hz / cfg_.gains.outer_rate_hz));
  reset();
}

void LegController::reset() {
  pi_ = {};
  estimator_ = {};
  phase_ = Phase::kSwing;
  contact_run_ = 0;
  air_run_ = 0;
  inner_count_ = 0;
  outer_updates_ = 0;
  tau_ref_ = {};
  signals_ = {};
}

Joint2 LegController::step(const ControllerRefs& refs, const Observation& obs) {
  const double Ts = 1.0 / cfg_.gains.rate_hz;
  if (inner_count_ == 0) {
    estimator_.vel = obs.omega_m[kKnee];
    estimator_.vel_rate = 0.0;
  }
  estimate_load_velocity(obs.omega_m[kKnee], estimator_, cfg_.knee, Ts);

  if (inner_count_ % inner_per_outer_ == 0) {
    outer_update(refs, obs);
  }
  ++inner_count_;

  Joint2 tau_out{};
  tau_out[kHip] = pi_torque_step(tau_ref_[kHip], obs.current[kHip], cfg_.gains, pi_[kHip], cfg_.hip);
  tau_out[kKnee] =
      pi_torque_step(tau_ref_[kKnee], obs.current[kKnee], cfg_.gains, pi_[kKnee], cfg_.knee);
  return tau_out;
}

void LegController::update_phase(double ground_force, const Observation& obs) {
  if (ground_force > cfg_.contact_force_threshold) {
    ++contact_run_;
    air_run_ = 0;
  } else {
    ++air_run_;
    contact_run_ = 0;
  }
  if (phase_ == Phase::kSwing && contact_run_ >= cfg_.contact_debounce_steps) {
    phase_ = Phase::kStance;
  } else if (phase_ == Phase::kStance && air_run_ >= cfg_.contact_debounce_steps) {
    phase_ = Phase::kSwing;
    // Wire wind-up accumulated in stance relaxes in flight; restart the
    // estimator from the motor velocity.
    estimator_.vel = obs.omega_m[kKnee];
    estimator_.vel_rate = 0.0;
  }
}

void LegController::outer_update(const ControllerRefs& refs, const Observation& obs) {
  update_phase(obs.ground_force, obs);
  ++outer_updates_;

  const JointAngles q{obs.theta_m[kHip], obs.theta_m[kKnee]};
  const Joint2 qdot{obs.omega_m[kHip], estimator_.vel};
  const Mat2 J = jacobian(q.hip, q.knee, cfg_.geometry);

  const Vec2 foot = forward_kinematics(q.hip, q.knee, cfg_.geometry);
  const Vec2 footdot = J * Vec2{qdot[kHip], qdot[kKnee]};
  const FootState obs_fs = FootState::from_cartesian(foot, footdot);
  const FootState des_fs = FootState::from_cartesian(refs.x_des, refs.xdot_des);

  const RadialError err = radial_error(des_fs, obs_fs);
  const double kvs_des = cfg_.stiffness_override ? cfg_.stiffness_override(err.position)
                                                 : stiffness_schedule(err.position, cfg_.schedule);
  const double kd = damping_schedule(err.velocity, cfg_.schedule);

  double kw_cart = cfg_.fixed_wire_stiffness_cart;
  if (cfg_.reflect_wire_through_jacobian && obs_fs.r > 1e-9) {
    const Vec2 n{obs_fs.x.x / obs_fs.r, obs_fs.x.z / obs_fs.r};
    kw_cart = reflect_wire_stiffness(J, n, cfg_.knee.K_w);
  }
  const double kvs_cmd = compensate_wire(kvs_des, kw_cart);

  const Joint2 omega_l_hat{obs.omega_m[kHip], estimator_.vel};
  const Joint2 ff_omega_m = cfg_.friction_compensation ? obs.omega_m : Joint2{0.0, 0.0};
  const Joint2 ff_omega_l = cfg_.friction_compensation ? omega_l_hat : Joint2{0.0, 0.0};
  Joint2 tau_alpha = feedforward_torque(refs.alpha_ref, ff_omega_m, ff_omega_l, q, qdot,
                                        cfg_.hip, cfg_.knee, cfg_.geometry, cfg_.dynamics);
  const Vec2 ff = J.transposed() * refs.feedforward_force;
  tau_alpha[kHip] += ff.x;
  tau_alpha[kKnee] += ff.z;

  tau_ref_ = compliance_torque(des_fs, obs_fs, Mat2::diag(kvs_cmd, kvs_cmd),
                               Mat2::diag(kd, kd), J, tau_alpha);

  signals_.tau_ref = tau_ref_;
  signals_.tau_alpha = tau_alpha;
  signals_.kvs_desired = kvs_des;
  signals_.kvs_commanded = kvs_cmd;
  signals_.kd = kd;
  signals_.omega_l_hat_knee = estimator_.vel;
  signals_.foot_obs = foot;
  signals_.footdot_obs = footdot;
  signals_.phase = phase_;
}

}  // namespace legsim
