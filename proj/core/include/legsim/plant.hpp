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

// Continuous-time dynamics of one actuated joint: motor inertia, elastic
// wire coupling, load inertia, Coulomb + viscous friction on both sides,
// plus a unilateral spring-damper ground contact model.
//
// Wire joints (the knee) carry the full motor->wire->load chain
//   dw_m/dt  = (tau_out - friction_m - tau_l) / J_m
//   dtau_l/dt = K_w (w_m - w_l)
//   dw_l/dt  = (tau_l - friction_l - tau_ext) / J_l
// Rigidly coupled joints (the hip) collapse to a single lumped inertia
// J_m + J_l with summed friction; motor and load states are kept equal.

#ifndef LEGSIM_PLANT_HPP_
#define LEGSIM_PLANT_HPP_

#include <array>

namespace legsim {

struct PlantParams {
  double J_m = 0.15;       // motor-side inertia [kg m^2]
  double B_m = 0.25;       // motor viscous coefficient [N m s/rad]
  double J_l = 0.005;      // load-side inertia [kg m^2]
  double B_l = 0.7;        // load viscous coefficient [N m s/rad]
  double K_w = 2000.0;     // wire stiffness [N m/rad], unused when rigid
  double tau_cfm = 0.3;    // motor Coulomb friction magnitude [N m]
  double tau_cfl = 0.15;   // load Coulomb friction magnitude [N m]
  double K_I = 0.8;        // motor torque constant [N m/A]
  double tau_max = 33.0;   // torque saturation limit [N m]
  double eps_v = 1e-3;     // Coulomb smoothing velocity [rad/s]
  bool rigid_coupling = false;

  void validate(const char* joint_name) const;
};

struct PlantState {
  double theta_m = 0.0;  // motor angle [rad]
  double omega_m = 0.0;  // motor angular velocity [rad/s]
  double theta_l = 0.0;  // load angle [rad]
  double omega_l = 0.0;  // load angular velocity [rad/s]
  double tau_l = 0.0;    // wire torque on the load [N m]

  bool finite() const;
};

struct GroundModel {
  double k_g = 5.0e4;         // contact stiffness [N/m]
  double c_g = 500.0;         // contact damping [N s/m]
  double ground_height = 0.0; // world height of the ground plane [m]

  void validate() const;
};

// Smoothed Coulomb plus viscous friction; odd in omega, zero at rest.
double friction_torque(double omega, double tau_cf, double B, double eps_v = 1e-3);

// Time derivative of the joint state under commanded torque tau_out and
// external load torque tau_ext. Throws NumericError on non-finite input.
PlantState plant_derivatives(const PlantState& state, double tau_out, double tau_ext,
                             const PlantParams& params);

// One fixed-step RK4 update with tau_out and tau_ext held over dt.
// Deterministic; throws NumericError naming the offending signal on blow-up.
PlantState step(const PlantState& state, double tau_out, double tau_ext,
                const PlantParams& params, double dt);

// Vertical ground reaction at the foot point. Non-tensile: never negative.
double ground_reaction(double foot_height, double foot_vertical_velocity,
                       const GroundModel& ground);

// Polynomial coefficients of w_l(s)/tau_out(s) for the wire-coupled joint.
// numerator is the constant K_w; denominator is ordered s^3..s^0.
struct TransferFunctionCoeffs {
  double numerator = 0.0;
  std::array<double, 4> denominator{};  // {s^3, s^2, s^1, s^0}
};

// Throws std::invalid_argument for rigid joints (the wire term degenerates).
TransferFunctionCoeffs transfer_function_coeffs(const PlantParams& params);

// Mechanical energy of the joint chain: kinetic terms plus wire spring energy.
double mechanical_energy(const PlantState& state, const PlantParams& params);

}  // namespace legsim

#endif  // LEGSIM_PLANT_HPP_
