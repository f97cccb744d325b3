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

#include "legsim/scenario.hpp"

#include <cmath>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

ScheduleMode parse_mode(const std::string& mode) {
  if (mode == "nonlinear") return ScheduleMode::kNonlinear;
  if (mode == "linear") return ScheduleMode::kLinear;
  if (mode == "span") return ScheduleMode::kSpan;
  throw ConfigError("schedule.mode must be nonlinear|linear|span, got '" + mode + "'");
}

std::string mode_name(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::kNonlinear: return "nonlinear";
    case ScheduleMode::kLinear: return "linear";
    case ScheduleMode::kSpan: return "span";
  }
  return "nonlinear";
}

ReferenceKind parse_reference_kind(const std::string& kind) {
  if (kind == "hold") return ReferenceKind::kHold;
  if (kind == "sinusoid") return ReferenceKind::kSinusoid;
  if (kind == "cpg") return ReferenceKind::kCpg;
  throw ConfigError("reference.kind must be hold|sinusoid|cpg, got '" + kind + "'");
}

std::string reference_kind_name(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::kHold: return "hold";
    case ReferenceKind::kSinusoid: return "sinusoid";
    case ReferenceKind::kCpg: return "cpg";
  }
  return "hold";
}

ImpulseShape parse_impulse_shape(const std::string& shape) {
  if (shape == "half-sine") return ImpulseShape::kHalfSine;
  if (shape == "rectangular") return ImpulseShape::kRectangular;
  throw ConfigError("impact.impulse_shape must be half-sine|rectangular, got '" + shape + "'");
}

PlantParams load_plant(TomlReader r, const PlantParams& def) {
  PlantParams p = def;
  p.J_m = r.number_or("J_m", def.J_m);
  p.B_m = r.number_or("B_m", def.B_m);
  p.J_l = r.number_or("J_l", def.J_l);
  p.B_l = r.number_or("B_l", def.B_l);
  p.K_w = r.number_or("K_w", def.K_w);
  p.tau_cfm = r.number_or("tau_cfm", def.tau_cfm);
  p.tau_cfl = r.number_or("tau_cfl", def.tau_cfl);
  p.K_I = r.number_or("K_I", def.K_I);
  p.tau_max = r.number_or("tau_max", def.tau_max);
  p.eps_v = r.number_or("eps_v", def.eps_v);
  p.rigid_coupling = r.boolean_or("rigid_coupling", def.rigid_coupling);
  return p;
}

void emit_plant(TomlTable& t, const PlantParams& p) {
  auto num = [](double v) {
    TomlValue x;
    x.kind = TomlValue::Kind::kNumber;
    x.number = v;
    return x;
  };
  TomlValue rigid;
  rigid.kind = TomlValue::Kind::kBool;
  rigid.boolean = p.rigid_coupling;
  t.values["J_m"] = num(p.J_m);
  t.values["B_m"] = num(p.B_m);
  t.values["J_l"] = num(p.J_l);
  t.values["B_l"] = num(p.B_l);
  t.values["K_w"] = num(p.K_w);
  t.values["tau_cfm"] = num(p.tau_cfm);
  t.values["tau_cfl"] = num(p.tau_cfl);
  t.values["K_I"] = num(p.K_I);
  t.values["tau_max"] = num(p.tau_max);
  t.values["eps_v"] = num(p.eps_v);
  t.values["rigid_coupling"] = rigid;
}

TomlValue num_value(double v) {
  TomlValue x;
  x.kind = TomlValue::Kind::kNumber;
  x.number = v;
  return x;
}

TomlValue str_value(const std::string& s) {
  TomlValue x;
  x.kind = TomlValue::Kind::kString;
  x.str = s;
  return x;
}

TomlValue bool_value(bool b) {
  TomlValue x;
  x.kind = TomlValue::Kind::kBool;
  x.boolean = b;
  return x;
}

TomlValue array_value(const std::vector<double>& vs) {
  TomlValue x;
  x.kind = TomlValue::Kind::kArray;
  for (double v : vs) x.array.push_back(num_value(v));
  return x;
}

}  // namespace

Scenario Scenario::defaults() {
  Scenario s;
  s.hip.J_m = 0.15;
  s.hip.B_m = 0.25;
  s.hip.J_l = 0.01;
  s.hip.B_l = 0.10;
  s.hip.K_w = 2000.0;  // unused, rigid
  s.hip.tau_cfm = 0.3;
  s.hip.tau_cfl = 0.2;
  s.hip.rigid_coupling = true;

  s.knee.J_m = 0.15;
  s.knee.B_m = 0.25;
  s.knee.J_l = 0.005;
  s.knee.B_l = 0.7;
  s.knee.K_w = 2000.0;
  s.knee.tau_cfm = 0.3;
  s.knee.tau_cfl = 0.15;
  s.knee.rigid_coupling = false;

  s.schedules.push_back({"nonlinear", GainSchedule{}});
  return s;
}

void Scenario::validate() const {
  if (duration <= 0.0) throw ConfigError("duration must be > 0");
  if (dt <= 0.0) throw ConfigError("dt must be > 0");
  gains.validate();
  if (dt > 1.0 / gains.outer_rate_hz + 1e-15) {
    throw ConfigError("dt must not exceed the outer loop period");
  }
  const double steps = 1.0 / (gains.rate_hz * dt);
  if (std::fabs(steps - std::round(steps)) > 1e-6 || steps < 1.0) {
    throw ConfigError("plant dt must divide the inner loop period exactly");
  }
  hip.validate("hip");
  knee.validate("knee");
  if (!hip.rigid_coupling) throw ConfigError("plant.hip must have rigid_coupling = true");
  if (knee.rigid_coupling) throw ConfigError("plant.knee must have rigid_coupling = false");
  geometry.validate();
  dynamics.validate();
  ground.validate();
  if (schedules.empty()) throw ConfigError("at least one [[schedule]] is required");
  for (const auto& ns : schedules) ns.schedule.validate();
  if (body_mass_share <= 0.0 || total_mass <= 0.0) {
    throw ConfigError("body.mass_share and body.total_mass must be > 0");
  }
  if (body_mass_share > total_mass) {
    throw ConfigError("body.mass_share cannot exceed body.total_mass");
  }
  if (reference.kind == ReferenceKind::kCpg) reference.gait.validate();
  if (impact.impulse_duration <= 0.0 || impact.load_window <= 0.0 ||
      impact.steady_window <= 0.0 || impact.settle_tol <= 0.0) {
    throw ConfigError("impact windows and tolerances must be > 0");
  }
  for (double p : impact.impulse_peaks) {
    if (p < 0.0) throw ConfigError("impact.impulse_peaks must be >= 0");
  }
  if (characterization.settle_time <= 0.0) {
    throw ConfigError("characterization.settle_time must be > 0");
  }
  if (characterization.commanded != "schedule" && characterization.commanded != "exp-demo") {
    throw ConfigError("characterization.commanded must be schedule|exp-demo");
  }
  if (pi_bench.freq_hz <= 0.0 || pi_bench.duration <= 0.0) {
    throw ConfigError("pi_bench.freq_hz and duration must be > 0");
  }
}

Scenario Scenario::from_toml(TomlTable& doc) {
  const Scenario def = defaults();
  Scenario s = def;
  TomlReader root(doc);

  s.name = root.string_or("name", def.name);
  s.duration = root.number_or("duration", def.duration);
  s.dt = root.number_or("dt", def.dt);

  if (root.has_table("plant")) {
    TomlReader plant = root.table("plant");
    s.hip = load_plant(plant.table_or_empty("hip"), def.hip);
    s.knee = load_plant(plant.table_or_empty("knee"), def.knee);
  }

  TomlReader geom = root.table_or_empty("geometry");
  s.geometry.l1 = geom.number_or("l1", def.geometry.l1);
  s.geometry.l2 = geom.number_or("l2", def.geometry.l2);
  s.geometry.knee_sign = static_cast<int>(geom.number_or("knee_sign", def.geometry.knee_sign));

  TomlReader dyn = root.table_or_empty("dynamics");
  s.dynamics.m1 = dyn.number_or("m1", def.dynamics.m1);
  s.dynamics.c1 = dyn.number_or("c1", def.dynamics.c1);
  s.dynamics.m2 = dyn.number_or("m2", def.dynamics.m2);
  s.dynamics.c2 = dyn.number_or("c2", def.dynamics.c2);
  s.dynamics.gravity = dyn.number_or("gravity", def.dynamics.gravity);

  TomlReader ground = root.table_or_empty("ground");
  s.ground.k_g = ground.number_or("k_g", def.ground.k_g);
  s.ground.c_g = ground.number_or("c_g", def.ground.c_g);
  s.ground.ground_height = ground.number_or("ground_height", def.ground.ground_height);

  TomlReader gains = root.table_or_empty("gains");
  s.gains.K_p = gains.number_or("K_p", def.gains.K_p);
  s.gains.K_i = gains.number_or("K_i", def.gains.K_i);
  s.gains.filter_cutoff_hz = gains.number_or("filter_cutoff_hz", def.gains.filter_cutoff_hz);
  s.gains.rate_hz = gains.number_or("rate_hz", def.gains.rate_hz);
  s.gains.outer_rate_hz = gains.number_or("outer_rate_hz", def.gains.outer_rate_hz);

  const auto schedule_readers = root.table_array_or_empty("schedule");
  if (!schedule_readers.empty()) {
    s.schedules.clear();
    int index = 0;
    for (TomlReader r : schedule_readers) {
      NamedSchedule ns;
      ns.name = r.string_or("name", "schedule" + std::to_string(index));
      ns.schedule.mode = parse_mode(r.string_or("mode", "nonlinear"));
      ns.schedule.K_vs1 = r.number_or("K_vs1", 500.0);
      ns.schedule.K_vs2 = r.number_or("K_vs2", ns.schedule.mode == ScheduleMode::kLinear ? 0.0 : 500.0);
      ns.schedule.K_cv = r.number_or("K_cv", 50.0);
      ns.schedule.K_d1 = r.number_or("K_d1", 50.0);
      ns.schedule.K_d2 = r.number_or("K_d2", ns.schedule.mode == ScheduleMode::kNonlinear ? 100.0 : 0.0);
      ns.schedule.K_cd = r.number_or("K_cd", 10.0);
      s.schedules.push_back(ns);
      ++index;
    }
  }

  TomlReader ref = root.table_or_empty("reference");
  s.reference.kind = parse_reference_kind(ref.string_or("kind", reference_kind_name(def.reference.kind)));
  s.reference.hold_depth = ref.number_or("depth", def.reference.hold_depth);
  s.reference.hold_forward = ref.number_or("forward", def.reference.hold_forward);
  s.reference.amplitude = ref.number_or("amplitude", def.reference.amplitude);
  s.reference.freq_hz = ref.number_or("freq_hz", def.reference.freq_hz);
  s.reference.center = ref.number_or("center", def.reference.center);
  s.reference.azimuth = ref.number_or("azimuth", def.reference.azimuth);
  s.reference.gait.step_length = ref.number_or("step_length", def.reference.gait.step_length);
  s.reference.gait.step_height = ref.number_or("step_height", def.reference.gait.step_height);
  s.reference.gait.cycle_time = ref.number_or("cycle_time", def.reference.gait.cycle_time);
  s.reference.gait.duty_factor = ref.number_or("duty_factor", def.reference.gait.duty_factor);
  s.reference.gait.stance_depth = ref.number_or("stance_depth", def.reference.gait.stance_depth);

  TomlReader body = root.table_or_empty("body");
  s.body_mass_share = body.number_or("mass_share", def.body_mass_share);
  s.total_mass = body.number_or("total_mass", def.total_mass);

  TomlReader wire = root.table_or_empty("wire_compensation");
  s.reflect_wire_through_jacobian =
      wire.boolean_or("reflect_through_jacobian", def.reflect_wire_through_jacobian);
  s.fixed_wire_stiffness_cart =
      wire.number_or("fixed_cartesian_stiffness", def.fixed_wire_stiffness_cart);

  TomlReader contact = root.table_or_empty("contact");
  s.contact_force_threshold = contact.number_or("force_threshold", def.contact_force_threshold);
  s.contact_debounce_steps =
      static_cast<int>(contact.number_or("debounce_steps", def.contact_debounce_steps));

  TomlReader stop = root.table_or_empty("knee_stop");
  s.knee_stop.margin = stop.number_or("margin", def.knee_stop.margin);
  s.knee_stop.fold_stiffness = stop.number_or("fold_stiffness", def.knee_stop.fold_stiffness);
  s.knee_stop.fold_damping = stop.number_or("fold_damping", def.knee_stop.fold_damping);
  s.knee_stop.ext_stiffness = stop.number_or("ext_stiffness", def.knee_stop.ext_stiffness);
  s.knee_stop.ext_damping = stop.number_or("ext_damping", def.knee_stop.ext_damping);

  TomlReader impact = root.table_or_empty("impact");
  s.impact.impulse_peaks = impact.number_array_or("impulse_peaks", def.impact.impulse_peaks);
  s.impact.impulse_duration = impact.number_or("impulse_duration", def.impact.impulse_duration);
  s.impact.impulse_start = impact.number_or("impulse_start", def.impact.impulse_start);
  s.impact.impulse_shape =
      parse_impulse_shape(impact.string_or("impulse_shape", "half-sine"));
  s.impact.load_window = impact.number_or("load_window", def.impact.load_window);
  s.impact.load_smoothing = impact.number_or("load_smoothing", def.impact.load_smoothing);
  s.impact.steady_window = impact.number_or("steady_window", def.impact.steady_window);
  s.impact.settle_tol = impact.number_or("settle_tol", def.impact.settle_tol);
  s.impact.min_flight_time = impact.number_or("min_flight_time", def.impact.min_flight_time);

  TomlReader charac = root.table_or_empty("characterization");
  s.characterization.deflections =
      charac.number_array_or("deflections", def.characterization.deflections);
  s.characterization.deflection_max =
      charac.number_or("deflection_max", def.characterization.deflection_max);
  s.characterization.deflection_count = static_cast<int>(
      charac.number_or("deflection_count", def.characterization.deflection_count));
  s.characterization.settle_time =
      charac.number_or("settle_time", def.characterization.settle_time);
  s.characterization.commanded = charac.string_or("commanded", def.characterization.commanded);
  s.characterization.exp_kappa = charac.number_or("exp_kappa", def.characterization.exp_kappa);
  s.characterization.rig_damping =
      charac.number_or("rig_damping", def.characterization.rig_damping);

  TomlReader bench = root.table_or_empty("pi_bench");
  s.pi_bench.freq_hz = bench.number_or("freq_hz", def.pi_bench.freq_hz);
  s.pi_bench.amplitude = bench.number_or("amplitude", def.pi_bench.amplitude);
  s.pi_bench.offset = bench.number_or("offset", def.pi_bench.offset);
  s.pi_bench.duration = bench.number_or("duration", def.pi_bench.duration);

  TomlReader stab = root.table_or_empty("stability");
  s.stability.margin = stab.number_or("margin", def.stability.margin);
  s.stability.kd_scan_points =
      static_cast<int>(stab.number_or("kd_scan_points", def.stability.kd_scan_points));
  s.stability.agreement_tol = stab.number_or("agreement_tol", def.stability.agreement_tol);
  s.stability.omega_decades =
      static_cast<int>(stab.number_or("omega_decades", def.stability.omega_decades));
  s.stability.omega_points_per_decade = static_cast<int>(
      stab.number_or("omega_points_per_decade", def.stability.omega_points_per_decade));
  s.stability.workspace_margin =
      stab.number_or("workspace_margin", def.stability.workspace_margin);

  root.finish();
  s.validate();
  return s;
}

Scenario Scenario::load_file(const std::string& path) {
  TomlTable doc = toml_parse_file(path);
  return from_toml(doc);
}

TomlTable Scenario::to_toml() const {
  TomlTable doc;
  doc.values["name"] = str_value(name);
  doc.values["duration"] = num_value(duration);
  doc.values["dt"] = num_value(dt);

  emit_plant(doc.tables["plant"].tables["hip"], hip);
  emit_plant(doc.tables["plant"].tables["knee"], knee);

  TomlTable& geom = doc.tables["geometry"];
  geom.values["l1"] = num_value(geometry.l1);
  geom.values["l2"] = num_value(geometry.l2);
  geom.values["knee_sign"] = num_value(geometry.knee_sign);

  TomlTable& dyn = doc.tables["dynamics"];
  dyn.values["m1"] = num_value(dynamics.m1);
  dyn.values["c1"] = num_value(dynamics.c1);
  dyn.values["m2"] = num_value(dynamics.m2);
  dyn.values["c2"] = num_value(dynamics.c2);
  dyn.values["gravity"] = num_value(dynamics.gravity);

  TomlTable& gr = doc.tables["ground"];
  gr.values["k_g"] = num_value(ground.k_g);
  gr.values["c_g"] = num_value(ground.c_g);
  gr.values["ground_height"] = num_value(ground.ground_height);

  TomlTable& g = doc.tables["gains"];
  g.values["K_p"] = num_value(gains.K_p);
  g.values["K_i"] = num_value(gains.K_i);
  g.values["filter_cutoff_hz"] = num_value(gains.filter_cutoff_hz);
  g.values["rate_hz"] = num_value(gains.rate_hz);
  g.values["outer_rate_hz"] = num_value(gains.outer_rate_hz);

  for (const auto& ns : schedules) {
    TomlTable t;
    t.values["name"] = str_value(ns.name);
    t.values["mode"] = str_value(mode_name(ns.schedule.mode));
    t.values["K_vs1"] = num_value(ns.schedule.K_vs1);
    t.values["K_vs2"] = num_value(ns.schedule.K_vs2);
    t.values["K_cv"] = num_value(ns.schedule.K_cv);
    t.values["K_d1"] = num_value(ns.schedule.K_d1);
    t.values["K_d2"] = num_value(ns.schedule.K_d2);
    t.values["K_cd"] = num_value(ns.schedule.K_cd);
    doc.table_arrays["schedule"].push_back(t);
  }

  TomlTable& ref = doc.tables["reference"];
  ref.values["kind"] = str_value(reference_kind_name(reference.kind));
  ref.values["depth"] = num_value(reference.hold_depth);
  ref.values["forward"] = num_value(reference.hold_forward);
  ref.values["amplitude"] = num_value(reference.amplitude);
  ref.values["freq_hz"] = num_value(reference.freq_hz);
  ref.values["center"] = num_value(reference.center);
  ref.values["azimuth"] = num_value(reference.azimuth);
  ref.values["step_length"] = num_value(reference.gait.step_length);
  ref.values["step_height"] = num_value(reference.gait.step_height);
  ref.values["cycle_time"] = num_value(reference.gait.cycle_time);
  ref.values["duty_factor"] = num_value(reference.gait.duty_factor);
  ref.values["stance_depth"] = num_value(reference.gait.stance_depth);

  TomlTable& body = doc.tables["body"];
  body.values["mass_share"] = num_value(body_mass_share);
  body.values["total_mass"] = num_value(total_mass);

  TomlTable& wire = doc.tables["wire_compensation"];
  wire.values["reflect_through_jacobian"] = bool_value(reflect_wire_through_jacobian);
  wire.values["fixed_cartesian_stiffness"] = num_value(fixed_wire_stiffness_cart);

  TomlTable& contact = doc.tables["contact"];
  contact.values["force_threshold"] = num_value(contact_force_threshold);
  contact.values["debounce_steps"] = num_value(contact_debounce_steps);

  TomlTable& stop = doc.tables["knee_stop"];
  stop.values["margin"] = num_value(knee_stop.margin);
  stop.values["fold_stiffness"] = num_value(knee_stop.fold_stiffness);
  stop.values["fold_damping"] = num_value(knee_stop.fold_damping);
  stop.values["ext_stiffness"] = num_value(knee_stop.ext_stiffness);
  stop.values["ext_damping"] = num_value(knee_stop.ext_damping);

  TomlTable& imp = doc.tables["impact"];
  imp.values["impulse_peaks"] = array_value(impact.impulse_peaks);
  imp.values["impulse_duration"] = num_value(impact.impulse_duration);
  imp.values["impulse_start"] = num_value(impact.impulse_start);
  imp.values["impulse_shape"] = str_value(
      impact.impulse_shape == ImpulseShape::kHalfSine ? "half-sine" : "rectangular");
  imp.values["load_window"] = num_value(impact.load_window);
  imp.values["load_smoothing"] = num_value(impact.load_smoothing);
  imp.values["steady_window"] = num_value(impact.steady_window);
  imp.values["settle_tol"] = num_value(impact.settle_tol);
  imp.values["min_flight_time"] = num_value(impact.min_flight_time);

  TomlTable& ch = doc.tables["characterization"];
  if (!characterization.deflections.empty()) {
    ch.values["deflections"] = array_value(characterization.deflections);
  }
  ch.values["deflection_max"] = num_value(characterization.deflection_max);
  ch.values["deflection_count"] = num_value(characterization.deflection_count);
  ch.values["settle_time"] = num_value(characterization.settle_time);
  ch.values["commanded"] = str_value(characterization.commanded);
  ch.values["exp_kappa"] = num_value(characterization.exp_kappa);
  ch.values["rig_damping"] = num_value(characterization.rig_damping);

  TomlTable& pb = doc.tables["pi_bench"];
  pb.values["freq_hz"] = num_value(pi_bench.freq_hz);
  pb.values["amplitude"] = num_value(pi_bench.amplitude);
  pb.values["offset"] = num_value(pi_bench.offset);
  pb.values["duration"] = num_value(pi_bench.duration);

  TomlTable& st = doc.tables["stability"];
  st.values["margin"] = num_value(stability.margin);
  st.values["kd_scan_points"] = num_value(stability.kd_scan_points);
  st.values["agreement_tol"] = num_value(stability.agreement_tol);
  st.values["omega_decades"] = num_value(stability.omega_decades);
  st.values["omega_points_per_decade"] = num_value(stability.omega_points_per_decade);
  st.values["workspace_margin"] = num_value(stability.workspace_margin);

  return doc;
}

ControllerConfig Scenario::controller_config(const GainSchedule& schedule) const {
  ControllerConfig cfg;
  cfg.gains = gains;
  cfg.schedule = schedule;
  cfg.hip = hip;
  cfg.knee = knee;
  cfg.geometry = geometry;
  cfg.dynamics = dynamics;
  cfg.reflect_wire_through_jacobian = reflect_wire_through_jacobian;
  cfg.fixed_wire_stiffness_cart = fixed_wire_stiffness_cart;
  cfg.contact_force_threshold = contact_force_threshold;
  cfg.contact_debounce_steps = contact_debounce_steps;
  return cfg;
}

int Scenario::plant_steps_per_inner() const {
  return static_cast<int>(std::lround(1.0 / (gains.rate_hz * dt)));
}

}  // namespace legsim
