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

// Experiment CLI: runs the bench experiments of the leg controller against
// a scenario file and writes traces, sidecar configs and summary reports.

#include <CLI11.hpp>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "legsim/experiments.hpp"
#include "legsim/scenario.hpp"
#include "legsim/stability.hpp"
#include "legsim/toml.hpp"
#include "legsim/trace.hpp"

namespace fs = std::filesystem;
using namespace legsim;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  double dt_override = 0.0;
  double duration_override = 0.0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "Scenario TOML file")->required();
  cmd->add_option("--out", opt.out_dir, "Output directory");
  cmd->add_option("--dt", opt.dt_override, "Override plant integration step [s]");
  cmd->add_option("--duration", opt.duration_override, "Override run duration [s]");
}

Scenario load_scenario(const CommonOptions& opt) {
  Scenario sc = Scenario::load_file(opt.config_path);
  if (opt.dt_override > 0.0) sc.dt = opt.dt_override;
  if (opt.duration_override > 0.0) sc.duration = opt.duration_override;
  sc.validate();
  fs::create_directories(opt.out_dir);
  return sc;
}

std::string safe_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
  }
  return out.empty() ? "unnamed" : out;
}

void write_summary(const std::string& out_dir, const std::string& text) {
  const std::string path = out_dir + "/summary.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  std::cout << text;
}

int run_pi_bench_cmd(const CommonOptions& opt) {
  const Scenario sc = load_scenario(opt);
  const PiBenchResult res = run_pi_bench(sc);
  emit_trace(res.trace, opt.out_dir + "/pi_bench.csv", toml_serialize(sc.to_toml()));

  std::ostringstream s;
  s << "experiment: pi-bench\n"
    << "scenario: " << sc.name << "\n"
    << "frequency_hz: " << sc.pi_bench.freq_hz << "\n"
    << "amplitude_ratio: " << res.amplitude_ratio << "\n"
    << "phase_lag_deg: " << res.phase_lag_deg << "\n"
    << "steady_error_nm: " << res.steady_error << "\n"
    << "saturated: " << (res.saturated ? "yes" : "no") << "\n";
  write_summary(opt.out_dir, s.str());
  return 0;
}

int run_characterize_cmd(const CommonOptions& opt) {
  const Scenario sc = load_scenario(opt);
  const CharacterizationResult res = run_spring_characterization(sc);

  Trace table({"radial_error", "measured_force", "commanded_force", "skipped"});
  for (const auto& pt : res.points) {
    table.add_row({pt.radial_error, pt.measured_force, pt.commanded_force,
                   pt.skipped ? 1.0 : 0.0});
  }
  emit_trace(table, opt.out_dir + "/characterization.csv", toml_serialize(sc.to_toml()));

  std::ostringstream s;
  s << "experiment: characterize\n"
    << "scenario: " << sc.name << "\n"
    << "commanded: " << res.commanded_kind << "\n"
    << "fitted_stiffness_n_per_m: " << res.fitted_stiffness << "\n"
    << "commanded_stiffness_n_per_m: " << res.commanded_stiffness << "\n"
    << "points: " << res.points.size() << "\n";
  int skipped = 0;
  for (const auto& pt : res.points) skipped += pt.skipped ? 1 : 0;
  s << "skipped_points: " << skipped << "\n";
  write_summary(opt.out_dir, s.str());
  return 0;
}

int run_track_cmd(const CommonOptions& opt) {
  const Scenario sc = load_scenario(opt);
  const auto results = run_tracking_experiment(sc);

  std::ostringstream s;
  s << "experiment: track\n"
    << "scenario: " << sc.name << "\n";
  const std::string sidecar = toml_serialize(sc.to_toml());
  for (const auto& res : results) {
    const std::string path = opt.out_dir + "/track_" + safe_name(res.schedule_name) + ".csv";
    emit_trace(res.trace, path, sidecar);
    s << "schedule: " << res.schedule_name
      << " peak_radial_error_m: " << res.peak_radial_error
      << " rms_radial_error_m: " << res.rms_radial_error << "\n";
  }
  write_summary(opt.out_dir, s.str());
  return 0;
}

int run_impact_cmd(const CommonOptions& opt) {
  const Scenario sc = load_scenario(opt);
  const std::string sidecar = toml_serialize(sc.to_toml());

  std::ostringstream s;
  s << "experiment: impact\n"
    << "scenario: " << sc.name << "\n";
  for (double peak : sc.impact.impulse_peaks) {
    const auto reports = run_impact_experiment(sc, peak);
    for (const auto& rep : reports) {
      std::ostringstream fname;
      fname << opt.out_dir << "/impact_" << peak << "N_" << safe_name(rep.schedule_name)
            << ".csv";
      emit_trace(rep.trace, fname.str(), sidecar);
      s << "impulse_n: " << peak << " schedule: " << rep.schedule_name
        << " peak_knee_load_nm: " << rep.peak_knee_load
        << " mean_knee_load_nm: " << rep.mean_knee_load
        << " max_com_deviation_m: " << rep.max_com_deviation
        << " steady_com_error_m: " << rep.steady_com_error
        << " settle_time_s: " << rep.settle_time
        << " no_flight: " << (rep.no_flight ? "yes" : "no") << "\n";
    }
  }
  write_summary(opt.out_dir, s.str());
  return 0;
}

int run_stability_cmd(const CommonOptions& opt) {
  const Scenario sc = load_scenario(opt);

  std::ostringstream s;
  s << "experiment: stability\n"
    << "scenario: " << sc.name << "\n"
    << "margin: " << sc.stability.margin << "\n";
  bool all_certified = true;
  for (const auto& named : sc.schedules) {
    const StabilityReport rep =
        certify_schedule(named.schedule, sc.knee, sc.geometry, sc.stability);
    all_certified = all_certified && rep.certified;

    s << "schedule: " << named.name << "\n"
      << "  certified: " << (rep.certified ? "yes" : "no") << "\n"
      << "  omega_0_rad_s: " << rep.omega_0 << "\n"
      << "  re_at_omega0: " << rep.re_at_omega0 << "\n"
      << "  kvs_max_closed_nm_rad: " << rep.kvs_max_closed << "\n"
      << "  kvs_max_numeric_nm_rad: " << rep.kvs_max_numeric << "\n"
      << "  kvs_joint_peak_nm_rad: " << rep.kvs_joint_peak << "\n"
      << "  kd_joint_worst: " << rep.kd_joint_worst << "\n"
      << "  margin_used: " << rep.margin_used << "\n"
      << "  closed_form_supported: " << (rep.closed_form_supported ? "yes" : "no") << "\n"
      << "  note: " << rep.message << "\n";

    // Popov locus for plotting, at the worst-case joint damping.
    const PopovCoeffs coeffs = popov_coeffs(sc.knee, rep.kd_joint_worst);
    Trace locus({"omega", "re", "omega_im"});
    for (double w : make_omega_grid(coeffs, sc.stability.omega_decades, 64)) {
      const PopovPoint pt = popov_point(coeffs, sc.knee.K_w, w);
      locus.add_row({w, pt.re, pt.omega_im});
    }
    emit_trace(locus, opt.out_dir + "/popov_locus_" + safe_name(named.name) + ".csv");
  }
  write_summary(opt.out_dir, s.str());
  return all_certified ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"legsim: wire-transmission leg compliance control simulator"};
  app.require_subcommand(1);

  CommonOptions pi_opt, char_opt, track_opt, impact_opt, stab_opt;
  add_common(app.add_subcommand("pi-bench", "Inner torque loop tracking bench"), pi_opt);
  add_common(app.add_subcommand("characterize", "Quasi-static virtual spring characterization"),
             char_opt);
  add_common(app.add_subcommand("track", "Suspended-leg position tracking"), track_opt);
  add_common(app.add_subcommand("impact", "Quarter-body impact mitigation runs"), impact_opt);
  add_common(app.add_subcommand("stability", "Popov certification of the gain schedules"),
             stab_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("pi-bench")) return run_pi_bench_cmd(pi_opt);
    if (app.got_subcommand("characterize")) return run_characterize_cmd(char_opt);
    if (app.got_subcommand("track")) return run_track_cmd(track_opt);
    if (app.got_subcommand("impact")) return run_impact_cmd(impact_opt);
    if (app.got_subcommand("stability")) return run_stability_cmd(stab_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
