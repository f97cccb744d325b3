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

// Scenario runner and the four bench experiments: PI torque tracking,
// virtual-spring characterization, suspended-leg position tracking and the
// quarter-body impact test.

#ifndef LEGSIM_EXPERIMENTS_HPP_
#define LEGSIM_EXPERIMENTS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "legsim/scenario.hpp"
#include "legsim/trace.hpp"

namespace legsim {

// How the leg is mounted for a run.
enum class MountMode {
  kFixedBase,   // hip pinned, leg swings free (suspended)
  kHopper,      // hip carries the body mass share, vertical DoF, ground below
  kLockedLoad,  // load side clamped (spring characterization rig)
};

struct SimState {
  PlantState hip;
  PlantState knee;
  double body_height = 0.0;    // world height of the hip/body point [m]
  double body_velocity = 0.0;  // [m/s]
};

// One leg + controller + environment, advanced at the plant rate with the
// cascaded controller running at its own rates. Deterministic.
class LegSimulation {
 public:
  LegSimulation(const Scenario& scenario, const GainSchedule& schedule, MountMode mode,
                std::function<double(double)> stiffness_override = {});

  // Initial posture: joints at the IK solution of the given foot target,
  // wire relaxed, everything at rest. Hopper mode places the foot on the
  // ground plane.
  void init_posture(const Vec2& foot_target);

  // Advances one outer cycle using refs held over the cycle; returns the
  // signals recorded at the cycle start.
  struct CycleRecord {
    Joint2 tau_out{};
    double ground_force = 0.0;
    SimState state_at_start;
    ControlSignals signals;
    bool saturated_hip = false;
    bool saturated_knee = false;
  };
  CycleRecord run_outer_cycle(const ReferenceSample& refs, const Vec2& feedforward_force);

  const SimState& state() const { return state_; }
  LegController& controller() { return controller_; }
  double ground_force() const;
  double outer_dt() const { return outer_dt_; }

  // Kinematic body-height estimate from motor-side angles (encoder parity).
  double com_height_estimate() const;

 private:
  struct Derivative {
    PlantState hip;
    PlantState knee;
    double body_height = 0.0;
    double body_velocity = 0.0;
  };
  Derivative derivatives(const SimState& s, const Joint2& tau_out) const;
  SimState rk4(const SimState& s, const Joint2& tau_out, double dt) const;
  Observation observe() const;

  Scenario scenario_;
  MountMode mode_;
  LegController controller_;
  SimState state_;
  Joint2 last_tau_{};
  double outer_dt_;
  double inner_dt_;
  int inner_per_outer_;
  int plant_steps_per_inner_;
};

// Standard trace columns for scenario runs (the full Trace schema).
std::vector<std::string> scenario_trace_columns();

// ---------------------------------------------------------------------------
// Experiments.

struct PiBenchResult {
  Trace trace;  // t, tau_ref, tau_out, current, saturated
  double amplitude_ratio = 0.0;
  double phase_lag_deg = 0.0;
  double steady_error = 0.0;  // mean tracking offset over the final stretch [N m]
  bool saturated = false;
};

PiBenchResult run_pi_bench(const Scenario& scenario);

struct CharacterizationPoint {
  double radial_error = 0.0;    // commanded minus actual radial position [m]
  double measured_force = 0.0;  // radial output force [N]
  double commanded_force = 0.0; // commanded characteristic K(e) * e [N]
  bool skipped = false;         // deflection left the workspace
};

struct CharacterizationResult {
  std::vector<CharacterizationPoint> points;
  double fitted_stiffness = 0.0;     // least-squares slope through the origin
  double commanded_stiffness = 0.0;  // slope of the commanded characteristic
  std::string commanded_kind;
};

CharacterizationResult run_spring_characterization(const Scenario& scenario);
CharacterizationResult run_spring_characterization(const Scenario& scenario,
                                                   const std::vector<double>& deflection_grid);

struct TrackingResult {
  std::string schedule_name;
  Trace trace;
  double peak_radial_error = 0.0;  // over the steady window [m]
  double rms_radial_error = 0.0;
};

std::vector<TrackingResult> run_tracking_experiment(const Scenario& scenario);

struct ImpactReport {
  std::string schedule_name;
  double impulse_peak = 0.0;       // feed-forward peak [N]
  double peak_knee_load = 0.0;     // max smoothed |tau_l| in the window [N m]
  double raw_peak_knee_load = 0.0; // unsmoothed maximum [N m]
  double mean_knee_load = 0.0;     // mean |tau_l| over the window [N m]
  double max_com_deviation = 0.0;  // vs commanded stand height [m]
  double steady_com_error = 0.0;   // settled offset vs commanded height [m]
  double settle_time = 0.0;        // [s]
  bool no_flight = false;
  double impact_start = 0.0;       // [s]
  Trace trace;
};

std::vector<ImpactReport> run_impact_experiment(const Scenario& scenario);

// Impact reports for a single impulse peak (whole-robot newtons).
std::vector<ImpactReport> run_impact_experiment(const Scenario& scenario, double impulse_peak);

}  // namespace legsim

#endif  // LEGSIM_EXPERIMENTS_HPP_
