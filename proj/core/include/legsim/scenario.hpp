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

// Scenario description for the experiment runners: plant, geometry, ground,
// gains, schedules to compare, reference and per-experiment settings.
// Loaded from one TOML document; unknown keys are errors.

#ifndef LEGSIM_SCENARIO_HPP_
#define LEGSIM_SCENARIO_HPP_

#include <string>
#include <vector>

#include "legsim/control.hpp"
#include "legsim/plant.hpp"
#include "legsim/stability.hpp"
#include "legsim/toml.hpp"
#include "legsim/trajectory.hpp"

namespace legsim {

enum class ReferenceKind { kHold, kSinusoid, kCpg };

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::kHold;
  // hold
  double hold_depth = 0.28;
  double hold_forward = 0.0;
  // sinusoid
  double amplitude = 0.03;
  double freq_hz = 1.0;
  double center = 0.28;
  double azimuth = 0.0;
  // cpg
  GaitParams gait;
};

struct ImpactSpec {
  std::vector<double> impulse_peaks{200.0, 500.0, 800.0};  // feed-forward peaks [N]
  double impulse_duration = 0.2;                           // [s]
  double impulse_start = 1.0;                              // [s]
  ImpulseShape impulse_shape = ImpulseShape::kHalfSine;
  double load_window = 0.5;      // knee-load window after impact [s]
  double load_smoothing = 0.05;  // moving-average width for the load metrics [s]
  double steady_window = 0.3;    // steady-state averaging window [s]
  double settle_tol = 0.002;     // [m]
  double min_flight_time = 0.03; // shorter unloads are lift-off skims, not flight [s]
};

struct CharacterizationSpec {
  std::vector<double> deflections;  // explicit grid [m]; empty -> generated
  double deflection_max = 0.05;     // [m]
  int deflection_count = 21;        // points per side when generated
  double settle_time = 1.0;         // [s] per grid point
  std::string commanded = "schedule";  // "schedule" | "exp-demo"
  double exp_kappa = 125.0;            // demo curve gain [N/m]
  double rig_damping = 5.0;  // clamp dissipation on the motor shaft [N m s/rad]
};

struct PiBenchSpec {
  double freq_hz = 5.0;
  double amplitude = 10.0;  // [N m]
  double offset = 0.0;      // [N m]
  double duration = 2.0;    // [s]
};

struct NamedSchedule {
  std::string name;
  GainSchedule schedule;
};

// Lossy mechanical end-stops at the knee travel limits.
struct KneeStop {
  double margin = 0.25;          // engagement distance from either limit [rad]
  double fold_stiffness = 150.0; // [N m/rad]
  double fold_damping = 8.0;     // [N m s/rad]
  double ext_stiffness = 150.0;  // [N m/rad]
  double ext_damping = 8.0;      // [N m s/rad]
};

struct Scenario {
  std::string name = "default";
  double duration = 4.0;
  double dt = 2e-5;  // plant integration step [s]

  PlantParams hip;
  PlantParams knee;
  LegGeometry geometry;
  SegmentDynamics dynamics;
  GroundModel ground;
  PiGains gains;
  std::vector<NamedSchedule> schedules;
  ReferenceSpec reference;

  double body_mass_share = 3.75;  // vertical mass carried by this leg [kg]
  double total_mass = 15.0;       // whole robot [kg]

  bool reflect_wire_through_jacobian = true;
  double fixed_wire_stiffness_cart = 2.0e5;
  double contact_force_threshold = 1.0;
  int contact_debounce_steps = 2;

  KneeStop knee_stop;
  ImpactSpec impact;
  CharacterizationSpec characterization;
  PiBenchSpec pi_bench;
  CertifyOptions stability;

  void validate() const;

  static Scenario defaults();
  static Scenario from_toml(TomlTable& doc);
  static Scenario load_file(const std::string& path);

  // Fully resolved configuration (defaults applied) for the trace sidecar.
  TomlTable to_toml() const;

  ControllerConfig controller_config(const GainSchedule& schedule) const;
  int plant_steps_per_inner() const;
};

}  // namespace legsim

#endif  // LEGSIM_SCENARIO_HPP_
