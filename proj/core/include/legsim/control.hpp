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

// The cascaded leg controller:
//   outer loop (1 kHz): nonlinear compliance/impedance law with gain
//     schedules, wire-stiffness compensation and model feed-forward;
//   inner loop (5 kHz): PI current controller with low-pass filter and
//     torque saturation.
// A load-velocity estimator reconstructs the wire-decoupled joint velocity
// from the motor encoder between contacts.

#ifndef LEGSIM_CONTROL_HPP_
#define LEGSIM_CONTROL_HPP_

#include <array>
#include <functional>

#include "legsim/kinematics.hpp"
#include "legsim/plant.hpp"
#include "legsim/vec2.hpp"

namespace legsim {

using Joint2 = std::array<double, 2>;  // {hip, knee}

inline constexpr int kHip = 0;
inline constexpr int kKnee = 1;

struct PiGains {
  double K_p = 0.8;              // proportional gain on current error [A/A]
  double K_i = 400.0;            // integral gain [1/s]
  double filter_cutoff_hz = 20.0;
  double rate_hz = 5000.0;       // inner loop rate
  double outer_rate_hz = 1000.0; // compliance loop rate; must divide rate_hz

  void validate() const;
};

enum class ScheduleMode { kNonlinear, kLinear, kSpan };

struct GainSchedule {
  ScheduleMode mode = ScheduleMode::kNonlinear;
  double K_vs1 = 500.0;  // stiffness floor [N/m]
  double K_vs2 = 500.0;  // stiffness swing range [N/m]
  double K_cv = 50.0;    // stiffness shape constant [1/m]
  double K_d1 = 50.0;    // damping floor [N s/m]
  double K_d2 = 100.0;   // damping swing range [N s/m]
  double K_cd = 10.0;    // damping shape constant [s/m]

  void validate() const;
};

// Lumped two-link segment dynamics used by the gravity/Coriolis terms of the
// feed-forward and by the simulated plant's external torque.
struct SegmentDynamics {
  double m1 = 0.8;    // thigh mass [kg]
  double c1 = 0.11;   // thigh centroid distance from hip [m]
  double m2 = 0.35;   // lower-leg mass [kg]
  double c2 = 0.07;   // lower-leg centroid distance from knee [m]
  double gravity = 9.81;

  void validate() const;
};

struct PiState {
  double integrator = 0.0;   // accumulated current error * Ki [A]
  double filter_state = 0.0; // low-pass internal state [N m]
  bool saturated = false;    // last step hit the torque limit
};

struct EstimatorState {
  double vel = 0.0;       // estimated load velocity [rad/s]
  double vel_rate = 0.0;  // its time derivative [rad/s^2]
};

enum class Phase { kSwing, kStance };

// ---------------------------------------------------------------------------
// Elementary operations (composed by LegController, unit-testable alone).

// Inner-loop PI current controller: current reference tau_ref/K_I, PI on the
// current error, first-order low-pass, saturation to +-tau_max. Conditional
// integration freezes the integrator while the output is saturated and the
// error pushes further into the limit.
double pi_torque_step(double tau_ref, double current_measured, const PiGains& gains,
                      PiState& st, const PlantParams& params);

// Model feed-forward for one joint:
//   (J_m + J_l) alpha_ref + smoothed friction(omega_m, omega_l_hat) terms.
// Gravity and Coriolis are added at the leg level (see feedforward_torque).
double joint_feedforward(double alpha_ref, double omega_m, double omega_l_hat,
                         const PlantParams& params);

// Gravity torque the joints must output to hold the leg statically.
Joint2 gravity_torque(const JointAngles& q, const LegGeometry& geom,
                      const SegmentDynamics& dyn);

// Velocity-product (Coriolis/centrifugal) torque of the two-link chain.
Joint2 coriolis_torque(const JointAngles& q, const Joint2& qdot, const LegGeometry& geom,
                       const SegmentDynamics& dyn);

// Full feed-forward vector: per-joint inertial + friction terms plus the
// configuration-dependent gravity and Coriolis torques.
Joint2 feedforward_torque(const Joint2& alpha_ref, const Joint2& omega_m,
                          const Joint2& omega_l_hat, const JointAngles& q,
                          const Joint2& qdot, const PlantParams& hip,
                          const PlantParams& knee, const LegGeometry& geom,
                          const SegmentDynamics& dyn);

// Exact zero-order-hold update of the second-order load-velocity filter
//   omega_hat(s)/omega_m(s) = K_w / (K_w + J_l s^2 + B_l s).
// Returns the new estimate; st holds the filter state between calls.
double estimate_load_velocity(double omega_m, EstimatorState& st,
                              const PlantParams& params, double dt);

// Wire-series compensation: the commanded stiffness whose series combination
// with the wire equals K_des. Requires K_des < K_w_cart.
double compensate_wire(double K_des, double K_w_cart);

// Joint-space wire stiffness reflected to the foot along direction n.
double reflect_wire_stiffness(const Mat2& J, const Vec2& radial_dir, double K_w_joint);

// Nonlinear stiffness schedule: K_vs1 + K_vs2 / cosh(K_cv * e).
// Even in e; range (K_vs1, K_vs1 + K_vs2]. Linear mode returns K_vs1.
double stiffness_schedule(double radial_pos_error, const GainSchedule& sched);

// Nonlinear damping schedule: K_d1 + K_d2 (1 + erf(-K_cd * edot)) / 2.
// Strictly decreasing in edot; range (K_d1, K_d1 + K_d2). Linear and span
// modes return the constant K_d1.
double damping_schedule(double radial_vel_error, const GainSchedule& sched);

// Error function, odd, bounded in (-1, 1), abs error < 1e-7.
double erf(double x);

// Active compliance torque: J^T [K_vs (x_des - x) + K_d (xd_des - xd)] + tau_alpha.
Joint2 compliance_torque(const FootState& x_des, const FootState& x, const Mat2& K_vs_m,
                         const Mat2& K_d_m, const Mat2& J, const Joint2& tau_alpha);

// ---------------------------------------------------------------------------
// Composed controller.

struct ControllerConfig {
  PiGains gains;
  GainSchedule schedule;
  PlantParams hip;
  PlantParams knee;
  LegGeometry geometry;
  SegmentDynamics dynamics;
  bool reflect_wire_through_jacobian = true;
  double fixed_wire_stiffness_cart = 2.0e5;  // used when not reflecting [N/m]
  double contact_force_threshold = 1.0;      // [N]
  int contact_debounce_steps = 2;            // consecutive outer steps
  // Velocity-driven friction terms of the feed-forward. Disabled on the
  // quasi-static characterization rig, where compensating a clamped load
  // turns the Coulomb term into a relay oscillator.
  bool friction_compensation = true;
  // Replaces the stiffness schedule when set (e.g. the exponential demo
  // spring of the characterization bench); takes the radial position error.
  std::function<double(double)> stiffness_override;
};

struct ControllerRefs {
  Vec2 x_des;              // desired foot position [m]
  Vec2 xdot_des;           // desired foot velocity [m/s]
  Joint2 alpha_ref{};      // desired joint accelerations [rad/s^2]
  Vec2 feedforward_force;  // extra foot force through the feed-forward channel [N]
};

struct Observation {
  Joint2 theta_m{};   // motor angles (encoders) [rad]
  Joint2 omega_m{};   // motor velocities [rad/s]
  Joint2 current{};   // measured motor currents [A]
  double ground_force = 0.0;  // vertical contact force at the foot [N]
};

// Signals captured each outer cycle for the trace.
struct ControlSignals {
  Joint2 tau_ref{};
  Joint2 tau_alpha{};
  double kvs_desired = 0.0;    // schedule output before wire compensation
  double kvs_commanded = 0.0;  // after wire compensation
  double kd = 0.0;
  double omega_l_hat_knee = 0.0;
  Vec2 foot_obs;
  Vec2 footdot_obs;
  Phase phase = Phase::kSwing;
};

class LegController {
 public:
  explicit LegController(const ControllerConfig& config);

  // One inner-loop step. The outer compliance stage reruns every
  // inner_per_outer() calls; in between, tau_ref is held.
  Joint2 step(const ControllerRefs& refs, const Observation& obs);

  void reset();

  int inner_per_outer() const { return inner_per_outer_; }
  long outer_updates() const { return outer_updates_; }
  const ControlSignals& signals() const { return signals_; }
  bool saturated(int joint) const { return pi_[joint].saturated; }
  Phase phase() const { return phase_; }

 private:
  void outer_update(const ControllerRefs& refs, const Observation& obs);
  void update_phase(double ground_force, const Observation& obs);

  ControllerConfig cfg_;
  int inner_per_outer_ = 5;
  long inner_count_ = 0;
  long outer_updates_ = 0;

  std::array<PiState, 2> pi_{};
  EstimatorState estimator_{};
  Phase phase_ = Phase::kSwing;
  int contact_run_ = 0;
  int air_run_ = 0;

  Joint2 tau_ref_{};  // held between outer updates
  ControlSignals signals_{};
};

}  // namespace legsim

#endif  // LEGSIM_CONTROL_HPP_
