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

#include <cmath>
#include <cstdio>
#include <fstream>

#include <doctest.h>

#include "legsim/errors.hpp"
#include "legsim/experiments.hpp"
#include "legsim/scenario.hpp"
#include "legsim/toml.hpp"
#include "legsim/trace.hpp"

using namespace legsim;

TEST_CASE("toml subset: sections, arrays of tables, comments, strings") {
  const std::string text = R"(
# scenario
name = "demo"  # trailing comment
duration = 2.5

[plant.knee]
J_m = 0.15
rigid_coupling = false

[[schedule]]
name = "a"
K_vs1 = 500.0

[[schedule]]
name = "b # not a comment"
values = [1.0, 2e-3, -4]
)";
  TomlTable doc = toml_parse(text);
  TomlReader root(doc);
  CHECK(root.string("name") == "demo");
  CHECK(root.number("duration") == doctest::Approx(2.5));
  TomlReader knee = root.table("plant").table("knee");
  CHECK(knee.number("J_m") == doctest::Approx(0.15));
  CHECK(knee.boolean_or("rigid_coupling", true) == false);
  auto schedules = root.table_array("schedule");
  CHECK(schedules.size() == 2);
  CHECK(schedules[0].string("name") == "a");
  CHECK(schedules[0].number("K_vs1") == doctest::Approx(500.0));
  CHECK(schedules[1].string("name") == "b # not a comment");
  const auto vals = schedules[1].number_array("values");
  CHECK(vals.size() == 3);
  CHECK(vals[1] == doctest::Approx(2e-3));
  CHECK_NOTHROW(root.finish());
}

TEST_CASE("toml subset: malformed input and duplicates are rejected") {
  CHECK_THROWS_AS(toml_parse("key value\n"), ConfigError);
  CHECK_THROWS_AS(toml_parse("[unterminated\n"), ConfigError);
  CHECK_THROWS_AS(toml_parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(toml_parse("[s]\n[s]\n"), ConfigError);
  CHECK_THROWS_AS(toml_parse("a = [1, ]\n"), ConfigError);
  CHECK_THROWS_AS(toml_parse("a = nonsense\n"), ConfigError);
}

TEST_CASE("toml round trip through the serializer") {
  Scenario sc = Scenario::defaults();
  sc.name = "round-trip";
  sc.knee.K_w = 1234.5;
  TomlTable doc = sc.to_toml();
  const std::string text = toml_serialize(doc);
  TomlTable parsed = toml_parse(text);
  const Scenario again = Scenario::from_toml(parsed);
  CHECK(again.name == "round-trip");
  CHECK(again.knee.K_w == doctest::Approx(1234.5));
  CHECK(again.gains.rate_hz == doctest::Approx(sc.gains.rate_hz));
  CHECK(again.schedules.size() == sc.schedules.size());
}

TEST_CASE("unknown config keys are errors") {
  const std::string text = "name = \"x\"\nbogus_key = 1\n";
  TomlTable doc = toml_parse(text);
  CHECK_THROWS_WITH_AS(Scenario::from_toml(doc), doctest::Contains("unknown keys"), ConfigError);

  const std::string nested = "[gains]\nK_p = 0.5\ntypo = 2\n";
  TomlTable doc2 = toml_parse(nested);
  CHECK_THROWS_WITH_AS(Scenario::from_toml(doc2), doctest::Contains("typo"), ConfigError);
}

TEST_CASE("scenario validation catches inconsistent rates") {
  Scenario sc = Scenario::defaults();
  sc.gains.rate_hz = 4500.0;  // outer 1000 does not divide it
  CHECK_THROWS_AS(sc.validate(), ConfigError);

  Scenario sc2 = Scenario::defaults();
  sc2.dt = 3e-5;  // does not divide the 5 kHz inner period
  CHECK_THROWS_AS(sc2.validate(), ConfigError);

  Scenario sc3 = Scenario::defaults();
  sc3.schedules.clear();
  CHECK_THROWS_AS(sc3.validate(), ConfigError);
}

TEST_CASE("trace: empty csv, round trip, schema") {
  Trace empty(scenario_trace_columns());
  const std::string csv = empty.to_csv();
  CHECK(csv.find("t,") == 0);
  CHECK(csv.find('\n') == csv.size() - 1);  // header-only

  Trace t({"t", "a", "b"});
  t.add_row({0.0, 1.0 / 3.0, -2.5e-17});
  t.add_row({1e-3, 0.1 + 0.2, 1e300});
  const Trace back = Trace::from_csv_text(t.to_csv());
  REQUIRE(back.rows() == 2);
  for (size_t i = 0; i < 2; ++i) {
    for (const auto& name : t.columns()) {
      CHECK(back.at(i, name) == t.at(i, name));  // %.17g round-trips exactly
    }
  }

  // Every Trace schema field is present in scenario traces.
  const auto cols = scenario_trace_columns();
  for (const char* required :
       {"t", "theta_m_knee", "omega_l_knee", "tau_out_knee", "tau_ref_knee", "tau_alpha_knee",
        "tau_l_knee", "ground_force", "foot_x_des", "foot_x", "kvs_des", "kd",
        "omega_l_hat_knee", "com_height", "com_height_est", "sat_knee"}) {
    CHECK(std::count(cols.begin(), cols.end(), std::string(required)) == 1);
  }
}

TEST_CASE("emit_trace writes csv plus sidecar and round-trips") {
  Trace t({"t", "x"});
  t.add_row({0.0, 1.5});
  t.add_row({0.001, -2.5});
  const std::string path = "/tmp/legsim_test_trace.csv";
  emit_trace(t, path, "name = \"sidecar\"\n");
  const Trace back = parse_trace_file(path);
  CHECK(back.rows() == 2);
  CHECK(back.at(1, "x") == -2.5);
  std::ifstream meta("/tmp/legsim_test_trace.meta.toml");
  REQUIRE(meta.good());
  std::string line;
  std::getline(meta, line);
  CHECK(line == "name = \"sidecar\"");
  std::remove(path.c_str());
  std::remove("/tmp/legsim_test_trace.meta.toml");

  CHECK_THROWS_AS(emit_trace(t, "/nonexistent_dir_xyz/out.csv"), std::runtime_error);
}

TEST_CASE("pi bench: DC convergence, 5 Hz ratio, saturation clamp") {
  Scenario sc = Scenario::defaults();
  sc.pi_bench.freq_hz = 5.0;
  sc.pi_bench.amplitude = 10.0;
  sc.pi_bench.duration = 2.0;
  const PiBenchResult r5 = run_pi_bench(sc);
  CHECK(r5.amplitude_ratio >= 0.95);
  CHECK_FALSE(r5.saturated);

  Scenario dc = sc;
  dc.pi_bench.amplitude = 0.0;
  dc.pi_bench.offset = 8.0;
  const PiBenchResult rdc = run_pi_bench(dc);
  CHECK(rdc.steady_error < 1e-9);
  CHECK_FALSE(rdc.saturated);

  Scenario big = sc;
  big.pi_bench.amplitude = 0.0;
  big.pi_bench.offset = 100.0;
  const PiBenchResult rbig = run_pi_bench(big);
  CHECK(rbig.saturated);
  const auto tau = rbig.trace.column("tau_out");
  CHECK(tau.back() == doctest::Approx(33.0));
}

TEST_CASE("spring characterization: linear slope and zero-deflection force") {
  Scenario sc = Scenario::defaults();
  sc.schedules.clear();
  GainSchedule lin;
  lin.mode = ScheduleMode::kLinear;
  lin.K_vs1 = 75.0;
  lin.K_vs2 = 0.0;
  lin.K_d1 = 10.0;
  lin.K_d2 = 0.0;
  sc.schedules.push_back({"linear-75", lin});
  sc.characterization.commanded = "schedule";
  sc.characterization.settle_time = 1.0;

  const std::vector<double> grid{-0.04, -0.02, -0.01, 0.0, 0.01, 0.02, 0.04};
  const CharacterizationResult res = run_spring_characterization(sc, grid);
  REQUIRE(res.points.size() == grid.size());
  CHECK(std::fabs(res.fitted_stiffness - 75.0) < 7.5);
  for (const auto& pt : res.points) {
    if (pt.skipped) continue;
    if (pt.radial_error == 0.0) CHECK(std::fabs(pt.measured_force) < 0.05);
  }

  // A deflection outside the annulus is skipped and reported, not fatal.
  const CharacterizationResult skip = run_spring_characterization(sc, {0.0, 0.25});
  CHECK(skip.points.size() == 2);
  CHECK(skip.points[1].skipped);
}

TEST_CASE("impact experiment: zero impulse reports the standing load without flight") {
  Scenario sc = Scenario::defaults();
  sc.duration = 2.0;
  sc.schedules.clear();
  GainSchedule lin;
  lin.mode = ScheduleMode::kLinear;
  lin.K_vs1 = 1000.0;
  lin.K_vs2 = 0.0;
  lin.K_d1 = 150.0;
  lin.K_d2 = 0.0;
  sc.schedules.push_back({"linear", lin});
  const auto reports = run_impact_experiment(sc, 0.0);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].no_flight);
  CHECK(reports[0].peak_knee_load > 0.1);   // carries the body weight
  CHECK(reports[0].peak_knee_load >= reports[0].mean_knee_load);
  CHECK(reports[0].max_com_deviation >= 0.0);
  CHECK(reports[0].steady_com_error > 0.0);  // gravity sag vs commanded height
  reports[0].trace.check_consistency();
}

TEST_CASE("commanded torque is continuous through a swing cycle") {
  Scenario sc = Scenario::defaults();
  sc.duration = 1.0;
  sc.reference.kind = ReferenceKind::kCpg;
  auto results = [&] {
    LegSimulation sim(sc, sc.schedules.front().schedule, MountMode::kFixedBase);
    CpgTrajectory traj(sc.reference.gait, sc.geometry);
    sim.init_posture(traj.sample(0.0).x_des);
    Trace tr(scenario_trace_columns());
    std::vector<double> taus;
    for (int k = 0; k < 1000; ++k) {
      const auto rec = sim.run_outer_cycle(traj.sample(k * sim.outer_dt()), Vec2{});
      taus.push_back(rec.tau_out[kKnee]);
    }
    return taus;
  }();
  double max_jump = 0.0;
  for (size_t i = 1; i < results.size(); ++i) {
    max_jump = std::fmax(max_jump, std::fabs(results[i] - results[i - 1]));
  }
  CHECK(max_jump < 5.0);  // no saturation-scale discontinuities
}

TEST_CASE("stiffness schedule dips through the impact and recovers") {
  Scenario sc = Scenario::defaults();
  sc.duration = 3.5;
  sc.reference.hold_depth = 0.29;
  sc.ground.c_g = 650.0;
  const auto reports = run_impact_experiment(sc, 500.0);
  const auto& rep = reports.front();
  REQUIRE_FALSE(rep.no_flight);

  const auto t = rep.trace.column("t");
  const auto kvs = rep.trace.column("kvs_des");
  double flight = 0.0, dip = 1e9, after = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= rep.impact_start - 0.1 && t[i] < rep.impact_start) {
      flight = std::fmax(flight, kvs[i]);
    }
    if (t[i] >= rep.impact_start && t[i] < rep.impact_start + 0.3) dip = std::fmin(dip, kvs[i]);
    if (t[i] > sc.duration - 0.2) after = std::fmax(after, kvs[i]);
  }
  CHECK(flight > 650.0);       // stiffening while the error closes in the air
  CHECK(dip < 510.0);          // actively reduced through the impact
  CHECK(after > dip + 15.0);   // recovers toward the settled value
}

TEST_CASE("scenario runs are deterministic byte for byte") {
  Scenario sc = Scenario::defaults();
  sc.duration = 0.5;
  sc.reference.kind = ReferenceKind::kSinusoid;
  auto run_csv = [&] {
    auto results = run_tracking_experiment(sc);
    return results.front().trace.to_csv();
  };
  const std::string a = run_csv();
  const std::string b = run_csv();
  CHECK(a == b);
}
