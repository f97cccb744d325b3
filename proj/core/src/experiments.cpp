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

#include "legsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

SimState sim_axpy(const SimState& s, const SimState& d, double h) {
  SimState r;
  auto joint = [&](const PlantState& a, const PlantState& b) {
    PlantState out;
    out.theta_m = a.theta_m + h * b.theta_m;
    out.omega_m = a.omega_m + h * b.omega_m;
    out.theta_l = a.theta_l + h * b.theta_l;
    out.omega_l = a.omega_l + h * b.omega_l;
    out.tau_l = a.tau_l + h * b.tau_l;
    return out;
  };
  r.hip = joint(s.hip, d.hip);
  r.knee = joint(s.knee, d.knee);
  r.body_height = s.body_height + h * d.body_height;
  r.body_velocity = s.body_velocity + h * d.body_velocity;
  return r;
}

}  // namespace

LegSimulation::LegSimulation(const Scenario& scenario, const GainSchedule& schedule,
                             MountMode mode, std::function<double(double)> stiffness_override)
    : scenario_(scenario),
      mode_(mode),
      controller_([&] {
        ControllerConfig cfg = scenario.controller_config(schedule);
        cfg.stiffness_override = std::move(stiffness_override);
        if (mode == MountMode::kLockedLoad) cfg.friction_compensation = false;
        return cfg;
      }()) {
  scenario_.validate();
  outer_dt_ = 1.0 / scenario_.gains.outer_rate_hz;
  inner_dt_ = 1.0 / scenario_.gains.rate_hz;
  inner_per_outer_ = controller_.inner_per_outer();
  plant_steps_per_inner_ = scenario_.plant_steps_per_inner();
}

void LegSimulation::init_posture(const Vec2& foot_target) {
  const JointAngles q = inverse_kinematics(foot_target, scenario_.geometry);
  state_ = SimState{};
  state_.hip.theta_m = state_.hip.theta_l = q.hip;
  state_.knee.theta_m = state_.knee.theta_l = q.knee;
  if (mode_ == MountMode::kHopper) {
    state_.body_height = scenario_.ground.ground_height + foot_target.z;
    state_.body_velocity = 0.0;
  }
  last_tau_ = {};
  controller_.reset();
}

LegSimulation::Derivative LegSimulation::derivatives(const SimState& s,
                                                     const Joint2& tau_out) const {
  const JointAngles q{s.hip.theta_l, s.knee.theta_l};
  const Joint2 qdot{s.hip.omega_l, s.knee.omega_l};

  Joint2 tau_ext = gravity_torque(q, scenario_.geometry, scenario_.dynamics);
  const Joint2 cor = coriolis_torque(q, qdot, scenario_.geometry, scenario_.dynamics);
  tau_ext[kHip] += cor[kHip];
  tau_ext[kKnee] += cor[kKnee];

  // Knee end-stops (unilateral spring-dampers in joint space): a lossy
  // bumper at the fold, a hard surface at full extension.
  {
    const KneeStop& stop = scenario_.knee_stop;
    const double upper = 3.14159265358979323846 - stop.margin;
    const double lower = stop.margin;
    if (q.knee > upper) {
      tau_ext[kKnee] += stop.fold_stiffness * (q.knee - upper) +
                        stop.fold_damping * std::fmax(qdot[kKnee], 0.0);
    } else if (q.knee < lower) {
      tau_ext[kKnee] += stop.ext_stiffness * (q.knee - lower) +
                        stop.ext_damping * std::fmin(qdot[kKnee], 0.0);
    }
  }

  double contact = 0.0;
  if (mode_ == MountMode::kHopper) {
    const Vec2 foot = forward_kinematics(q.hip, q.knee, scenario_.geometry);
    const Mat2 J = jacobian(q.hip, q.knee, scenario_.geometry);
    const Vec2 footdot = J * Vec2{qdot[kHip], qdot[kKnee]};
    const double foot_h = s.body_height - foot.z;
    const double foot_vv = s.body_velocity - footdot.z;
    contact = ground_reaction(foot_h, foot_vv, scenario_.ground);
    const Vec2 tau_contact = J.transposed() * Vec2{0.0, contact};
    tau_ext[kHip] += tau_contact.x;
    tau_ext[kKnee] += tau_contact.z;
  }

  Derivative d;
  d.hip = plant_derivatives(s.hip, tau_out[kHip], tau_ext[kHip], scenario_.hip);
  d.knee = plant_derivatives(s.knee, tau_out[kKnee], tau_ext[kKnee], scenario_.knee);

  if (mode_ == MountMode::kLockedLoad) {
    // Characterization rig: the output links are clamped. The rigid hip
    // cannot move at all; the knee motor still winds the wire against the
    // clamp, dissipating through the rig damping.
    d.hip = PlantState{};
    d.knee.theta_l = 0.0;
    d.knee.omega_l = 0.0;
    d.knee.omega_m -=
        scenario_.characterization.rig_damping * s.knee.omega_m / scenario_.knee.J_m;
  }

  if (mode_ == MountMode::kHopper) {
    d.body_height = s.body_velocity;
    d.body_velocity = contact / scenario_.body_mass_share - scenario_.dynamics.gravity;
  }
  return d;
}

SimState LegSimulation::rk4(const SimState& s, const Joint2& tau_out, double dt) const {
  auto as_state = [](const Derivative& d) {
    SimState x;
    x.hip = d.hip;
    x.knee = d.knee;
    x.body_height = d.body_height;
    x.body_velocity = d.body_velocity;
    return x;
  };
  const SimState k1 = as_state(derivatives(s, tau_out));
  const SimState k2 = as_state(derivatives(sim_axpy(s, k1, 0.5 * dt), tau_out));
  const SimState k3 = as_state(derivatives(sim_axpy(s, k2, 0.5 * dt), tau_out));
  const SimState k4 = as_state(derivatives(sim_axpy(s, k3, dt), tau_out));
  SimState sum = sim_axpy(s, k1, dt / 6.0);
  sum = sim_axpy(sum, k2, dt / 3.0);
  sum = sim_axpy(sum, k3, dt / 3.0);
  sum = sim_axpy(sum, k4, dt / 6.0);

  if (scenario_.hip.rigid_coupling) {
    sum.hip.theta_l = sum.hip.theta_m;
    sum.hip.omega_l = sum.hip.omega_m;
  }
  if (!std::isfinite(sum.knee.omega_l) || !std::isfinite(sum.body_height)) {
    throw NumericError("simulation: integration blew up");
  }
  return sum;
}

double LegSimulation::ground_force() const {
  if (mode_ != MountMode::kHopper) return 0.0;
  const JointAngles q{state_.hip.theta_l, state_.knee.theta_l};
  const Vec2 foot = forward_kinematics(q.hip, q.knee, scenario_.geometry);
  const Mat2 J = jacobian(q.hip, q.knee, scenario_.geometry);
  const Vec2 footdot = J * Vec2{state_.hip.omega_l, state_.knee.omega_l};
  return ground_reaction(state_.body_height - foot.z, state_.body_velocity - footdot.z,
                         scenario_.ground);
}

double LegSimulation::com_height_estimate() const {
  const Vec2 foot =
      forward_kinematics(state_.hip.theta_m, state_.knee.theta_m, scenario_.geometry);
  return scenario_.ground.ground_height + foot.z;
}

Observation LegSimulation::observe() const {
  Observation obs;
  obs.theta_m = {state_.hip.theta_m, state_.knee.theta_m};
  obs.omega_m = {state_.hip.omega_m, state_.knee.omega_m};
  obs.current = {last_tau_[kHip] / scenario_.hip.K_I, last_tau_[kKnee] / scenario_.knee.K_I};
  obs.ground_force = ground_force();
  return obs;
}

LegSimulation::CycleRecord LegSimulation::run_outer_cycle(const ReferenceSample& refs,
                                                          const Vec2& feedforward_force) {
  CycleRecord rec;
  rec.state_at_start = state_;

  ControllerRefs crefs;
  crefs.x_des = refs.x_des;
  crefs.xdot_des = refs.xdot_des;
  crefs.alpha_ref = refs.alpha_ref;
  crefs.feedforward_force = feedforward_force;

  for (int i = 0; i < inner_per_outer_; ++i) {
    const Observation obs = observe();
    const Joint2 tau = controller_.step(crefs, obs);
    if (i == 0) {
      rec.tau_out = tau;
      rec.ground_force = obs.ground_force;
      rec.signals = controller_.signals();
    }
    rec.saturated_hip = rec.saturated_hip || controller_.saturated(kHip);
    rec.saturated_knee = rec.saturated_knee || controller_.saturated(kKnee);
    for (int m = 0; m < plant_steps_per_inner_; ++m) {
      state_ = rk4(state_, tau, scenario_.dt);
    }
    last_tau_ = tau;
  }
  return rec;
}

std::vector<std::string> scenario_trace_columns() {
  return {"t",
          "theta_m_hip", "omega_m_hip", "theta_l_hip", "omega_l_hip",
          "tau_out_hip", "tau_ref_hip", "tau_alpha_hip", "tau_l_hip", "sat_hip",
          "theta_m_knee", "omega_m_knee", "theta_l_knee", "omega_l_knee",
          "tau_out_knee", "tau_ref_knee", "tau_alpha_knee", "tau_l_knee", "sat_knee",
          "omega_l_hat_knee", "kvs_des", "kvs_cmd", "kd",
          "foot_x_des", "foot_z_des", "foot_x", "foot_z",
          "ground_force", "com_height", "com_height_est", "phase"};
}

namespace {

// Shared scenario loop: one trace row per outer cycle, sampled at cycle start.
Trace run_loop(LegSimulation& sim, const Scenario& sc,
               const std::function<ReferenceSample(double)>& refs_at,
               const std::function<Vec2(double)>& ff_at, double duration) {
  Trace trace(scenario_trace_columns());
  const double outer_dt = sim.outer_dt();
  const long n = std::lround(duration / outer_dt);
  for (long k = 0; k < n; ++k) {
    const double t = k * outer_dt;
    const ReferenceSample refs = refs_at(t);
    const auto rec = sim.run_outer_cycle(refs, ff_at(t));

    const SimState& s = rec.state_at_start;
    const Vec2 foot =
        forward_kinematics(s.hip.theta_l, s.knee.theta_l, sc.geometry);
    const Vec2 foot_est =
        forward_kinematics(s.hip.theta_m, s.knee.theta_m, sc.geometry);
    const double com = s.body_height;
    const double com_est = sc.ground.ground_height + foot_est.z;

    trace.add_row({t,
                   s.hip.theta_m, s.hip.omega_m, s.hip.theta_l, s.hip.omega_l,
                   rec.tau_out[kHip], rec.signals.tau_ref[kHip], rec.signals.tau_alpha[kHip],
                   s.hip.tau_l, rec.saturated_hip ? 1.0 : 0.0,
                   s.knee.theta_m, s.knee.omega_m, s.knee.theta_l, s.knee.omega_l,
                   rec.tau_out[kKnee], rec.signals.tau_ref[kKnee], rec.signals.tau_alpha[kKnee],
                   s.knee.tau_l, rec.saturated_knee ? 1.0 : 0.0,
                   rec.signals.omega_l_hat_knee, rec.signals.kvs_desired,
                   rec.signals.kvs_commanded, rec.signals.kd,
                   refs.x_des.x, refs.x_des.z, foot.x, foot.z,
                   rec.ground_force, com, com_est,
                   rec.signals.phase == Phase::kStance ? 1.0 : 0.0});
  }
  trace.check_consistency();
  return trace;
}

Vec2 hold_target(const Scenario& sc) {
  return {sc.reference.hold_forward, sc.reference.hold_depth};
}

std::function<ReferenceSample(double)> make_reference(const Scenario& sc) {
  switch (sc.reference.kind) {
    case ReferenceKind::kHold: {
      auto traj = std::make_shared<HoldTrajectory>(hold_target(sc), sc.geometry);
      return [traj](double t) { return traj->sample(t); };
    }
    case ReferenceKind::kSinusoid: {
      auto traj = std::make_shared<SinusoidTrajectory>(sc.reference.amplitude,
                                                       sc.reference.freq_hz, sc.reference.center,
                                                       sc.reference.azimuth, sc.geometry);
      return [traj](double t) { return traj->sample(t); };
    }
    case ReferenceKind::kCpg: {
      auto traj = std::make_shared<CpgTrajectory>(sc.reference.gait, sc.geometry);
      return [traj](double t) { return traj->sample(t); };
    }
  }
  throw ConfigError("unknown reference kind");
}

}  // namespace

PiBenchResult run_pi_bench(const Scenario& scenario) {
  scenario.validate();
  const PiGains& gains = scenario.gains;
  const PlantParams& joint = scenario.knee;
  const PiBenchSpec& bench = scenario.pi_bench;

  PiBenchResult result;
  result.trace = Trace({"t", "tau_ref", "tau_out", "current", "saturated"});

  const double Ts = 1.0 / gains.rate_hz;
  const long n = std::lround(bench.duration * gains.rate_hz);
  const double w = 2.0 * kPi * bench.freq_hz;

  PiState st;
  double last_tau = 0.0;
  std::complex<double> demod_out{0.0, 0.0}, demod_ref{0.0, 0.0};
  const long periods = std::max(1L, static_cast<long>(std::floor(bench.duration * bench.freq_hz / 2.0)));
  const long window = std::min<long>(n, std::lround(periods / bench.freq_hz * gains.rate_hz));
  double steady_acc = 0.0;
  long steady_count = 0;

  for (long k = 0; k < n; ++k) {
    const double t = k * Ts;
    const double tau_ref = bench.offset + bench.amplitude * std::sin(w * t);
    const double current = last_tau / joint.K_I;
    const double tau = pi_torque_step(tau_ref, current, gains, st, joint);
    result.trace.add_row({t, tau_ref, tau, current, st.saturated ? 1.0 : 0.0});
    result.saturated = result.saturated || st.saturated;

    if (k >= n - window) {
      const std::complex<double> rot{std::cos(w * t), -std::sin(w * t)};
      demod_out += tau * rot;
      demod_ref += tau_ref * rot;
    }
    if (k >= n - std::max(1L, n / 10)) {
      steady_acc += tau - tau_ref;
      ++steady_count;
    }
    last_tau = tau;
  }

  if (std::abs(demod_ref) > 1e-12) {
    result.amplitude_ratio = std::abs(demod_out) / std::abs(demod_ref);
    result.phase_lag_deg = (std::arg(demod_ref) - std::arg(demod_out)) * 180.0 / kPi;
    if (result.phase_lag_deg > 180.0) result.phase_lag_deg -= 360.0;
    if (result.phase_lag_deg < -180.0) result.phase_lag_deg += 360.0;
  }
  result.steady_error = steady_count > 0 ? std::fabs(steady_acc / steady_count) : 0.0;
  return result;
}

CharacterizationResult run_spring_characterization(const Scenario& scenario) {
  std::vector<double> grid = scenario.characterization.deflections;
  if (grid.empty()) {
    const int m = std::max(scenario.characterization.deflection_count, 2);
    for (int i = -m; i <= m; ++i) {
      if (i == 0) continue;
      grid.push_back(scenario.characterization.deflection_max * i / m);
    }
    std::sort(grid.begin(), grid.end());
  }
  return run_spring_characterization(scenario, grid);
}

CharacterizationResult run_spring_characterization(const Scenario& scenario,
                                                   const std::vector<double>& deflection_grid) {
  scenario.validate();
  const GainSchedule& schedule = scenario.schedules.front().schedule;
  const bool exp_demo = scenario.characterization.commanded == "exp-demo";
  const double kappa = scenario.characterization.exp_kappa;

  std::function<double(double)> override_fn;
  if (exp_demo) {
    override_fn = [kappa](double e) { return kappa * (std::exp(std::fabs(e)) - 1.0); };
  }
  auto commanded_stiffness_at = [&](double e) {
    return exp_demo ? kappa * (std::exp(std::fabs(e)) - 1.0) : stiffness_schedule(e, schedule);
  };

  const Vec2 x0 = hold_target(scenario);
  const double r0 = x0.norm();
  const Vec2 dir{x0.x / r0, x0.z / r0};
  HoldTrajectory hold(x0, scenario.geometry);
  const ReferenceSample refs = hold.sample(0.0);

  CharacterizationResult result;
  result.commanded_kind = exp_demo ? "exp-demo" : "schedule";

  const double margin = 5e-3;
  const long cycles =
      std::lround(scenario.characterization.settle_time * scenario.gains.outer_rate_hz);

  double num = 0.0, den = 0.0, cnum = 0.0;
  for (double e : deflection_grid) {
    CharacterizationPoint pt;
    pt.radial_error = e;
    const double r_disp = r0 - e;
    if (r_disp < scenario.geometry.r_min() + margin || r_disp > scenario.geometry.r_max() - margin) {
      pt.skipped = true;
      result.points.push_back(pt);
      continue;
    }

    LegSimulation sim(scenario, schedule, MountMode::kLockedLoad, override_fn);
    sim.init_posture(Vec2{dir.x * r_disp, dir.z * r_disp});
    LegSimulation::CycleRecord rec;
    for (long k = 0; k < cycles; ++k) rec = sim.run_outer_cycle(refs, Vec2{});

    const SimState& s = sim.state();
    const Joint2 tau_meas{rec.tau_out[kHip], s.knee.tau_l};
    const Joint2& tau_alpha = rec.signals.tau_alpha;
    const Mat2 J = jacobian(s.hip.theta_l, s.knee.theta_l, scenario.geometry);
    const Vec2 f = J.transposed().inverse() *
                   Vec2{tau_meas[kHip] - tau_alpha[kHip], tau_meas[kKnee] - tau_alpha[kKnee]};
    pt.measured_force = f.dot(dir);
    pt.commanded_force = commanded_stiffness_at(e) * e;
    result.points.push_back(pt);

    num += pt.measured_force * e;
    den += e * e;
    cnum += pt.commanded_force * e;
  }
  result.fitted_stiffness = den > 0.0 ? num / den : 0.0;
  result.commanded_stiffness = den > 0.0 ? cnum / den : 0.0;
  return result;
}

std::vector<TrackingResult> run_tracking_experiment(const Scenario& scenario) {
  scenario.validate();
  if (scenario.reference.kind != ReferenceKind::kSinusoid &&
      scenario.reference.kind != ReferenceKind::kCpg) {
    throw ConfigError("tracking experiment needs a sinusoid or cpg reference");
  }
  auto refs_at = make_reference(scenario);
  auto no_ff = [](double) { return Vec2{}; };

  std::vector<TrackingResult> results;
  for (const auto& named : scenario.schedules) {
    LegSimulation sim(scenario, named.schedule, MountMode::kFixedBase);
    sim.init_posture(refs_at(0.0).x_des);
    TrackingResult res;
    res.schedule_name = named.name;
    res.trace = run_loop(sim, scenario, refs_at, no_ff, scenario.duration);

    const auto t = res.trace.column("t");
    const auto xd = res.trace.column("foot_x_des");
    const auto zd = res.trace.column("foot_z_des");
    const auto x = res.trace.column("foot_x");
    const auto z = res.trace.column("foot_z");
    const double t_skip = scenario.duration * 0.4;
    double peak = 0.0, sq = 0.0;
    long count = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      if (t[i] < t_skip) continue;
      const double e = std::hypot(xd[i], zd[i]) - std::hypot(x[i], z[i]);
      peak = std::fmax(peak, std::fabs(e));
      sq += e * e;
      ++count;
    }
    res.peak_radial_error = peak;
    res.rms_radial_error = count > 0 ? std::sqrt(sq / count) : 0.0;
    results.push_back(std::move(res));
  }
  return results;
}

std::vector<ImpactReport> run_impact_experiment(const Scenario& scenario, double impulse_peak) {
  scenario.validate();
  const Vec2 target = hold_target(scenario);
  HoldTrajectory hold(target, scenario.geometry);
  auto refs_at = [&hold](double t) { return hold.sample(t); };

  const ImpactSpec& imp = scenario.impact;
  // The impulse rides the leg's feed-forward channel at its stated peak, as
  // commanded on the robot; torque saturation caps what actually reaches
  // the ground.
  auto ff_at = [&](double t) -> Vec2 {
    const double local = t - imp.impulse_start;
    if (impulse_peak <= 0.0 || local < 0.0 || local > imp.impulse_duration) return {};
    return {0.0, impulse_profile(local, impulse_peak, imp.impulse_duration, imp.impulse_shape)};
  };

  const double h_ref = scenario.ground.ground_height + target.z;

  std::vector<ImpactReport> reports;
  for (const auto& named : scenario.schedules) {
    LegSimulation sim(scenario, named.schedule, MountMode::kHopper);
    sim.init_posture(target);

    ImpactReport rep;
    rep.schedule_name = named.name;
    rep.impulse_peak = impulse_peak;
    rep.trace = run_loop(sim, scenario, refs_at, ff_at, scenario.duration);

    const auto t = rep.trace.column("t");
    const auto force = rep.trace.column("ground_force");
    const auto tau_l = rep.trace.column("tau_l_knee");
    const auto com = rep.trace.column("com_height");
    const size_t n = t.size();

    // Flight begins when the foot unloads after the impulse starts; impact
    // is the first sustained touchdown after a real flight phase. Sub-50 ms
    // unloads are lift-off skims, not flight.
    const double thresh = scenario.contact_force_threshold;
    const long min_flight_rows =
        std::lround(imp.min_flight_time * scenario.gains.outer_rate_hz);
    size_t flight_idx = n, impact_idx = n;
    long air_run = 0, contact_run = 0;
    for (size_t i = 0; i < n && impact_idx == n; ++i) {
      if (t[i] < imp.impulse_start) continue;
      if (force[i] < thresh) {
        ++air_run;
        contact_run = 0;
        if (flight_idx == n && air_run >= std::max(2L, min_flight_rows)) {
          flight_idx = i + 1 - air_run;
        }
      } else {
        ++contact_run;
        if (flight_idx != n && contact_run >= 2) {
          impact_idx = i + 1 - contact_run;
        }
        air_run = 0;
      }
    }

    if (impact_idx == n) {
      rep.no_flight = true;
      rep.impact_start = imp.impulse_start + imp.impulse_duration;
      impact_idx = std::min<size_t>(
          n - 1, static_cast<size_t>(std::lround(rep.impact_start / sim.outer_dt())));
    } else {
      rep.impact_start = t[impact_idx];
    }

    // The reported knee load is the sensor-scale (smoothed) series; the
    // sub-millisecond passive wire ring stays visible in the raw trace.
    const double outer_dt = sim.outer_dt();
    const int half_width =
        std::max(0, static_cast<int>(std::lround(imp.load_smoothing / (2.0 * outer_dt))));
    auto smoothed = [&](size_t i) {
      const size_t lo = i >= static_cast<size_t>(half_width) ? i - half_width : 0;
      const size_t hi = std::min(n - 1, i + half_width);
      double acc = 0.0;
      for (size_t j = lo; j <= hi; ++j) acc += tau_l[j];
      return acc / static_cast<double>(hi - lo + 1);
    };

    const double window_end = rep.impact_start + imp.load_window;
    double peak = 0.0, raw_peak = 0.0, mean = 0.0;
    long count = 0;
    double max_dev = 0.0;
    for (size_t i = impact_idx; i < n; ++i) {
      if (t[i] <= window_end) {
        peak = std::fmax(peak, std::fabs(smoothed(i)));
        raw_peak = std::fmax(raw_peak, std::fabs(tau_l[i]));
        mean += std::fabs(tau_l[i]);
        ++count;
      }
      max_dev = std::fmax(max_dev, std::fabs(com[i] - h_ref));
    }
    rep.peak_knee_load = peak;
    rep.raw_peak_knee_load = raw_peak;
    rep.mean_knee_load = count > 0 ? mean / count : 0.0;
    rep.max_com_deviation = max_dev;

    double h_ss = 0.0;
    long ss_count = 0;
    for (size_t i = 0; i < n; ++i) {
      if (t[i] >= scenario.duration - imp.steady_window) {
        h_ss += com[i];
        ++ss_count;
      }
    }
    h_ss = ss_count > 0 ? h_ss / ss_count : h_ref;
    rep.steady_com_error = std::fabs(h_ss - h_ref);

    const double tol = std::fmax(imp.settle_tol, 0.05 * max_dev);
    double settle = 0.0;
    for (size_t i = impact_idx; i < n; ++i) {
      if (std::fabs(com[i] - h_ss) > tol) settle = t[i] - rep.impact_start;
    }
    rep.settle_time = settle;
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::vector<ImpactReport> run_impact_experiment(const Scenario& scenario) {
  std::vector<ImpactReport> all;
  for (double peak : scenario.impact.impulse_peaks) {
    auto batch = run_impact_experiment(scenario, peak);
    for (auto& rep : batch) all.push_back(std::move(rep));
  }
  return all;
}

}  // namespace legsim
