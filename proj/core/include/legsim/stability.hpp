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

// Popov absolute-stability analysis of the closed loop with the nonlinear
// stiffness gain. The restructured plant is
//   P(s) = K_w / (a s^4 + b s^3 + c s^2 + d s)
// and the nonlinearity is the joint-space stiffness in the sector
// (0, K_vs,max). Two routes to K_vs,max are provided:
//   - a closed form evaluated at the omega Im[P] = 0 crossing, and
//   - a numeric search for the best supporting Popov line over all slopes.
// The closed form assumes the crossing is a supporting point of the locus,
// which holds when the wire resonance is well damped; whenever it does not
// hold the numeric bound is smaller and certification uses the smaller one.

#ifndef LEGSIM_STABILITY_HPP_
#define LEGSIM_STABILITY_HPP_

#include <functional>
#include <string>
#include <vector>

#include "legsim/control.hpp"
#include "legsim/kinematics.hpp"
#include "legsim/plant.hpp"

namespace legsim {

struct PopovCoeffs {
  double a = 0.0;  // J_l J_m
  double b = 0.0;  // J_m B_l + J_l B_m
  double c = 0.0;  // (J_m + J_l) K_w + B_l B_m
  double d = 0.0;  // K_w (B_m + B_l + K_d)
};

struct PopovPoint {
  double re = 0.0;        // Re[P(jw)]
  double omega_im = 0.0;  // w * Im[P(jw)]
};

PopovCoeffs popov_coeffs(const PlantParams& params, double K_d);

// Popov-plane coordinates at frequency omega > 0. Throws NumericError when
// the evaluation denominator vanishes (pole on the imaginary axis).
PopovPoint popov_point(const PopovCoeffs& coeffs, double K_w, double omega);

// Frequency where omega Im[P] crosses zero.
double popov_crossing_frequency(const PopovCoeffs& coeffs);

// Closed-form K_vs,max at the crossing. Throws std::domain_error with
// "no certified stiffness range at this K_d" when the result is <= 0.
double kvs_max_closed_form(const PlantParams& params, double K_d);

// Same expression without the positivity check (for reporting/scanning).
double kvs_max_closed_form_raw(const PlantParams& params, double K_d);

// Log-spaced grid spanning `decades` decades centred on the crossing.
std::vector<double> make_omega_grid(const PopovCoeffs& coeffs, int decades = 8,
                                    int points_per_decade = 400);

// Largest K such that the locus stays right of some line through (-1/K, 0).
// Grid minima are polished by golden-section refinement; a minimizer pinned
// at a grid boundary raises NumericError ("omega grid too coarse").
// Returns +infinity when no line is ever crossed (sector unbounded).
double kvs_max_from_locus(const std::function<PopovPoint(double)>& locus,
                          const std::vector<double>& omega_grid);

// Numeric oracle evaluated by direct complex arithmetic on P(jw).
double kvs_max_numeric(const PlantParams& params, double K_d,
                       const std::vector<double>& omega_grid);
double kvs_max_numeric(const PlantParams& params, double K_d);

struct CertifyOptions {
  double margin = 0.5;          // required K_vs,peak / K_vs,max ratio
  int kd_scan_points = 13;      // K_d samples across the schedule range
  double agreement_tol = 1e-3;  // closed-vs-numeric relative tolerance
  int omega_decades = 8;
  int omega_points_per_decade = 400;
  double workspace_margin = 5e-3;  // annulus shrink for the Jacobian scan [m]
};

struct StabilityReport {
  double omega_0 = 0.0;            // crossing frequency at the worst K_d [rad/s]
  double re_at_omega0 = 0.0;       // Re[P(j omega_0)]
  double kvs_max_closed = 0.0;     // closed form at the worst K_d [N m/rad]
  double kvs_max_numeric = 0.0;    // supporting-line bound at the worst K_d
  double kvs_joint_peak = 0.0;     // schedule peak reflected to joint space
  double kd_joint_worst = 0.0;     // K_d (joint space) minimising the bound
  double sigma_max_sq = 0.0;       // worst-case Jacobian reflection factor
  double margin_used = 0.0;        // kvs_joint_peak / min certified bound
  bool closed_form_supported = false;  // numeric within agreement_tol of closed
  bool certified = false;
  std::string message;
};

// Certifies a Cartesian gain schedule against the wire-joint Popov bound.
// Schedule values are reflected to joint space through the worst-case
// Jacobian over the (shrunk) workspace annulus; the bound is the smaller of
// the closed-form and numeric routes at the worst K_d in the reflected range.
StabilityReport certify_schedule(const GainSchedule& sched, const PlantParams& params,
                                 const LegGeometry& geom,
                                 const CertifyOptions& options = {});

}  // namespace legsim

#endif  // LEGSIM_STABILITY_HPP_
