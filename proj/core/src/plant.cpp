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

#include "legsim/plant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

bool all_finite(const PlantState& s) {
  return std::isfinite(s.theta_m) && std::isfinite(s.omega_m) && std::isfinite(s.theta_l) &&
         std::isfinite(s.omega_l) && std::isfinite(s.tau_l);
}

const char* first_non_finite(const PlantState& s) {
  if (!std::isfinite(s.theta_m)) return "theta_m";
  if (!std::isfinite(s.omega_m)) return "omega_m";
  if (!std::isfinite(s.theta_l)) return "theta_l";
  if (!std::isfinite(s.omega_l)) return "omega_l";
  if (!std::isfinite(s.tau_l)) return "tau_l";
  return nullptr;
}

PlantState axpy(const PlantState& s, const PlantState& d, double h) {
  PlantState r;
  r.theta_m = s.theta_m + h * d.theta_m;
  r.omega_m = s.omega_m + h * d.omega_m;
  r.theta_l = s.theta_l + h * d.theta_l;
  r.omega_l = s.omega_l + h * d.omega_l;
  r.tau_l = s.tau_l + h * d.tau_l;
  return r;
}

}  // namespace

void PlantParams::validate(const char* joint_name) const {
  const std::string who = joint_name ? joint_name : "joint";
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw ConfigError("plant." + who + ": " + what);
  };
  require(J_m > 0.0, "J_m must be > 0");
  require(J_l > 0.0, "J_l must be > 0");
  require(B_m > 0.0, "B_m must be > 0");
  require(B_l > 0.0, "B_l must be > 0");
  require(rigid_coupling || K_w > 0.0, "K_w must be > 0 for wire joints");
  require(tau_cfm >= 0.0, "tau_cfm must be >= 0");
  require(tau_cfl >= 0.0, "tau_cfl must be >= 0");
  require(K_I > 0.0, "K_I must be > 0");
  require(tau_max > 0.0, "tau_max must be > 0");
  require(eps_v > 0.0, "eps_v must be > 0");
}

bool PlantState::finite() const { return all_finite(*this); }

void GroundModel::validate() const {
  if (k_g <= 0.0) throw ConfigError("ground.k_g must be > 0");
  if (c_g < 0.0) throw ConfigError("ground.c_g must be >= 0");
}

double friction_torque(double omega, double tau_cf, double B, double eps_v) {
  return std::tanh(omega / eps_v) * tau_cf + B * omega;
}

PlantState plant_derivatives(const PlantState& state, double tau_out, double tau_ext,
                             const PlantParams& p) {
  if (!all_finite(state)) {
    throw NumericError(std::string("plant_derivatives: non-finite state field ") +
                       first_non_finite(state));
  }
  if (!std::isfinite(tau_out) || !std::isfinite(tau_ext)) {
    throw NumericError("plant_derivatives: non-finite input torque");
  }

  PlantState d;
  if (p.rigid_coupling) {
    // Lumped inertia with summed friction; wire equation bypassed.
    const double fric = friction_torque(state.omega_m, p.tau_cfm + p.tau_cfl,
                                        p.B_m + p.B_l, p.eps_v);
    const double alpha = (tau_out - fric - tau_ext) / (p.J_m + p.J_l);
    d.theta_m = state.omega_m;
    d.omega_m = alpha;
    d.theta_l = state.omega_m;
    d.omega_l = alpha;
    d.tau_l = 0.0;
  } else {
    const double fric_m = friction_torque(state.omega_m, p.tau_cfm, p.B_m, p.eps_v);
    const double fric_l = friction_torque(state.omega_l, p.tau_cfl, p.B_l, p.eps_v);
    d.theta_m = state.omega_m;
    d.omega_m = (tau_out - fric_m - state.tau_l) / p.J_m;
    d.theta_l = state.omega_l;
    d.omega_l = (state.tau_l - fric_l - tau_ext) / p.J_l;
    d.tau_l = p.K_w * (state.omega_m - state.omega_l);
  }
  return d;
}

PlantState step(const PlantState& state, double tau_out, double tau_ext,
                const PlantParams& p, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");

  const PlantState k1 = plant_derivatives(state, tau_out, tau_ext, p);
  const PlantState k2 = plant_derivatives(axpy(state, k1, 0.5 * dt), tau_out, tau_ext, p);
  const PlantState k3 = plant_derivatives(axpy(state, k2, 0.5 * dt), tau_out, tau_ext, p);
  const PlantState k4 = plant_derivatives(axpy(state, k3, dt), tau_out, tau_ext, p);

  PlantState next;
  const double h6 = dt / 6.0;
  next.theta_m = state.theta_m + h6 * (k1.theta_m + 2.0 * k2.theta_m + 2.0 * k3.theta_m + k4.theta_m);
  next.omega_m = state.omega_m + h6 * (k1.omega_m + 2.0 * k2.omega_m + 2.0 * k3.omega_m + k4.omega_m);
  next.theta_l = state.theta_l + h6 * (k1.theta_l + 2.0 * k2.theta_l + 2.0 * k3.theta_l + k4.theta_l);
  next.omega_l = state.omega_l + h6 * (k1.omega_l + 2.0 * k2.omega_l + 2.0 * k3.omega_l + k4.omega_l);
  next.tau_l = state.tau_l + h6 * (k1.tau_l + 2.0 * k2.tau_l + 2.0 * k3.tau_l + k4.tau_l);

  if (p.rigid_coupling) {
    // Keep both sides identical and expose the load-side torque a rigid
    // coupling would transmit: J_l * alpha + load friction + tau_ext.
    next.theta_l = next.theta_m;
    next.omega_l = next.omega_m;
    const double fric = friction_torque(next.omega_m, p.tau_cfm + p.tau_cfl,
                                        p.B_m + p.B_l, p.eps_v);
    const double alpha = (tau_out - fric - tau_ext) / (p.J_m + p.J_l);
    next.tau_l = p.J_l * alpha + friction_torque(next.omega_l, p.tau_cfl, p.B_l, p.eps_v) + tau_ext;
  }

  if (!all_finite(next)) {
    throw NumericError(std::string("step: integration blew up, non-finite ") +
                       first_non_finite(next));
  }
  return next;
}

double ground_reaction(double foot_height, double foot_vertical_velocity,
                       const GroundModel& g) {
  if (foot_height >= g.ground_height) return 0.0;
  const double penetration = g.ground_height - foot_height;
  const double force = g.k_g * penetration - g.c_g * foot_vertical_velocity;
  return force > 0.0 ? force : 0.0;
}

TransferFunctionCoeffs transfer_function_coeffs(const PlantParams& p) {
  if (p.rigid_coupling) {
    throw std::invalid_argument(
        "transfer_function_coeffs: rigid coupling has no wire transfer function");
  }
  TransferFunctionCoeffs tf;
  tf.numerator = p.K_w;
  // (K_w + J_l s^2 + B_l s)(J_m s + B_m) + K_w (J_l s + B_l), expanded.
  tf.denominator[0] = p.J_l * p.J_m;
  tf.denominator[1] = p.J_l * p.B_m + p.J_m * p.B_l;
  tf.denominator[2] = p.B_l * p.B_m + p.K_w * p.J_m + p.K_w * p.J_l;
  tf.denominator[3] = p.K_w * (p.B_m + p.B_l);
  return tf;
}

double mechanical_energy(const PlantState& s, const PlantParams& p) {
  if (p.rigid_coupling) {
    return 0.5 * (p.J_m + p.J_l) * s.omega_m * s.omega_m;
  }
  return 0.5 * p.J_m * s.omega_m * s.omega_m + 0.5 * p.J_l * s.omega_l * s.omega_l +
         0.5 * s.tau_l * s.tau_l / p.K_w;
}

}  // namespace legsim
