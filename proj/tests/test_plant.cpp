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
#include <complex>
#include <random>

#include <doctest.h>

#include "legsim/errors.hpp"
#include "oracles.hpp"

using namespace legsim;

namespace {

PlantParams example_params() {
  PlantParams p;
  p.J_m = 0.01;
  p.B_m = 0.1;
  p.J_l = 0.02;
  p.B_l = 0.05;
  p.K_w = 1e4;
  p.tau_cfm = 0.0;
  p.tau_cfl = 0.0;
  p.rigid_coupling = false;
  return p;
}

}  // namespace

TEST_CASE("friction torque: direct evaluation and odd symmetry") {
  CHECK(friction_torque(1.0, 0.2, 0.1) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(friction_torque(0.0, 5.0, 3.0) == 0.0);
  for (double w : {0.01, 1.0, 10.0}) {
    CHECK(friction_torque(-w, 0.2, 0.1) == doctest::Approx(-friction_torque(w, 0.2, 0.1)));
  }
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double w = u(rng);
    CHECK(friction_torque(-w, 0.4, 0.2) == doctest::Approx(-friction_torque(w, 0.4, 0.2)));
  }
}

TEST_CASE("plant derivatives: fixed point and wire torque rate") {
  PlantParams p = example_params();
  PlantState zero;
  const PlantState d0 = plant_derivatives(zero, 0.0, 0.0, p);
  CHECK(d0.omega_m == 0.0);
  CHECK(d0.omega_l == 0.0);
  CHECK(d0.tau_l == 0.0);

  PlantState s;
  s.omega_m = 1.0;
  s.omega_l = 0.0;
  const PlantState d = plant_derivatives(s, 0.0, 0.0, p);
  CHECK(d.tau_l == doctest::Approx(1e4).epsilon(1e-12));

  PlantState bad;
  bad.omega_m = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(plant_derivatives(bad, 0.0, 0.0, p), NumericError);
  CHECK_THROWS_AS(plant_derivatives(zero, std::numeric_limits<double>::infinity(), 0.0, p),
                  NumericError);
}

TEST_CASE("linear regime matches the transfer-function oracle") {
  PlantParams p = example_params();
  const double dt = 1e-5;
  const int steps = 20000;  // 0.2 s

  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  test::wire_chain_state_space(p.J_m, p.B_m, p.J_l, p.B_l, p.K_w, A, B, C);
  const auto expected =
      test::linear_zoh_response(A, B, C, 1.0, Eigen::VectorXd::Zero(3), dt, steps);

  PlantState s;
  double max_err = 0.0;
  for (int k = 0; k <= steps; ++k) {
    max_err = std::fmax(max_err, std::fabs(s.omega_l - expected[k]));
    s = step(s, 1.0, 0.0, p, dt);
  }
  CHECK(max_err < 1e-6);
}

TEST_CASE("step: fixed point, self-convergence, viscous decay") {
  PlantParams p = example_params();
  p.tau_cfm = 0.3;
  p.tau_cfl = 0.2;

  PlantState zero;
  const PlantState advanced = step(zero, 0.0, 0.0, p, 1e-4);
  CHECK(advanced.theta_m == 0.0);
  CHECK(advanced.omega_l == 0.0);
  CHECK(advanced.tau_l == 0.0);

  // Local order: one step of dt vs two steps of dt/2 differ at O(dt^5), so
  // doubling dt grows the difference by about 2^5.
  auto local_delta = [&](double dt) {
    PlantState s;
    s.omega_m = 2.0;
    s.tau_l = 0.5;
    const PlantState one = step(s, 0.5, 0.0, p, dt);
    const PlantState two = step(step(s, 0.5, 0.0, p, dt / 2), 0.5, 0.0, p, dt / 2);
    return std::fabs(one.omega_l - two.omega_l) + std::fabs(one.omega_m - two.omega_m);
  };
  const double ratio = local_delta(8e-5) / local_delta(4e-5);
  CHECK(ratio > 16.0);
  CHECK(ratio < 64.0);

  // Richardson self-convergence over 1 s.
  auto endpoint = [&](double dt) {
    PlantState s;
    s.omega_m = 2.0;
    const long n = std::lround(1.0 / dt);
    for (long i = 0; i < n; ++i) s = step(s, 0.5, 0.0, p, dt);
    return s;
  };
  const PlantState a = endpoint(2e-5);
  const PlantState b = endpoint(1e-5);
  const double scale = std::fabs(b.theta_l) + 1e-9;
  CHECK(std::fabs(a.theta_l - b.theta_l) / scale < 1e-4);
  CHECK(std::fabs(a.omega_l - b.omega_l) < 1e-4 * (std::fabs(b.omega_l) + 1.0));

  // Pure viscous decay through the rigid path with a vanishing load side.
  PlantParams visc;
  visc.J_m = 0.01;
  visc.B_m = 0.1;
  visc.J_l = 1e-12;
  visc.B_l = 1e-12;
  visc.tau_cfm = 0.0;
  visc.tau_cfl = 0.0;
  visc.rigid_coupling = true;
  PlantState s;
  s.omega_m = 3.0;
  const double dt = 2e-5;
  for (long i = 0; i < 50000; ++i) s = step(s, 0.0, 0.0, visc, dt);
  CHECK(s.omega_m == doctest::Approx(3.0 * std::exp(-visc.B_m / visc.J_m)).epsilon(1e-6));
}

TEST_CASE("step rejects blow-ups naming the signal") {
  PlantParams p = example_params();
  PlantState s;
  s.omega_m = 1.0;
  // A wildly unstable dt for the wire mode.
  CHECK_THROWS_WITH_AS(
      [&] {
        for (int i = 0; i < 100000; ++i) s = step(s, 0.0, 0.0, p, 0.5);
      }(),
      doctest::Contains("non-finite"), NumericError);
}

TEST_CASE("ground reaction: unilateral spring-damper") {
  GroundModel g;
  g.k_g = 5e4;
  g.c_g = 500.0;
  g.ground_height = 0.0;
  CHECK(ground_reaction(0.01, -1.0, g) == 0.0);
  CHECK(ground_reaction(-0.001, 0.0, g) == doctest::Approx(50.0));
  // Rapid withdrawal: damping term would exceed the spring force.
  CHECK(ground_reaction(-0.001, 5.0, g) == 0.0);
}

TEST_CASE("transfer function coefficients and factored-form cross-check") {
  PlantParams p = example_params();
  const TransferFunctionCoeffs tf = transfer_function_coeffs(p);
  CHECK(tf.numerator == doctest::Approx(1e4));
  CHECK(tf.denominator[0] == doctest::Approx(2e-4).epsilon(1e-12));
  CHECK(tf.denominator[1] == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(tf.denominator[2] == doctest::Approx(300.005).epsilon(1e-12));
  CHECK(tf.denominator[3] == doctest::Approx(1500.0).epsilon(1e-12));

  // DC gain 1/(B_m + B_l).
  CHECK(tf.numerator / tf.denominator[3] == doctest::Approx(1.0 / (p.B_m + p.B_l)));

  // Frequency response: expanded polynomial vs unexpanded product form.
  const std::complex<double> s(0.0, 10.0);
  const std::complex<double> expanded =
      tf.numerator / (((tf.denominator[0] * s + tf.denominator[1]) * s + tf.denominator[2]) * s +
                      tf.denominator[3]);
  const std::complex<double> product =
      p.K_w / ((p.K_w + p.J_l * s * s + p.B_l * s) * (p.J_m * s + p.B_m) +
               p.K_w * (p.J_l * s + p.B_l));
  CHECK(std::abs(expanded - product) < 1e-12 * std::abs(product) + 1e-15);

  PlantParams rigid = p;
  rigid.rigid_coupling = true;
  CHECK_THROWS_AS(transfer_function_coeffs(rigid), std::invalid_argument);
}

TEST_CASE("energy audit: unforced chain dissipates at every step") {
  PlantParams p = example_params();
  p.tau_cfm = 0.3;
  p.tau_cfl = 0.2;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    PlantState s;
    s.omega_m = 5.0 * u(rng);
    s.omega_l = 5.0 * u(rng);
    s.tau_l = 3.0 * u(rng);
    double energy = mechanical_energy(s, p);
    for (int i = 0; i < 2000; ++i) {
      s = step(s, 0.0, 0.0, p, 2e-5);
      const double next = mechanical_energy(s, p);
      CHECK(next <= energy + 1e-12);
      energy = next;
    }
  }
}

TEST_CASE("rigid-coupling limit: stiff wire converges to the lumped model") {
  PlantParams wire = example_params();
  wire.tau_cfm = 0.1;
  wire.tau_cfl = 0.1;
  wire.K_w = 1e8;
  PlantParams rigid = wire;
  rigid.rigid_coupling = true;

  PlantState sw, sr;
  sw.omega_m = sw.omega_l = 1.0;
  sr.omega_m = sr.omega_l = 1.0;
  const double dt = 1e-6;  // resolve the 1e8 wire mode
  const long n = std::lround(0.5 / dt);
  for (long i = 0; i < n; ++i) {
    const double tau = 0.4 * std::sin(2.0 * 3.14159265358979 * 2.0 * i * dt);
    sw = step(sw, tau, 0.0, wire, dt);
    sr = step(sr, tau, 0.0, rigid, dt);
  }
  CHECK(std::fabs(sw.theta_l - sr.theta_l) <
        1e-3 * (std::fabs(sr.theta_l) + 1e-3));
  CHECK(std::fabs(sw.omega_l - sr.omega_l) < 1e-3 * (std::fabs(sr.omega_l) + 1e-3));
}

TEST_CASE("step is deterministic bit for bit") {
  PlantParams p = example_params();
  p.tau_cfm = 0.2;
  auto run = [&] {
    PlantState s;
    s.omega_m = 1.3;
    s.tau_l = 0.4;
    for (int i = 0; i < 5000; ++i) s = step(s, 0.7, 0.05, p, 2e-5);
    return s;
  };
  const PlantState a = run();
  const PlantState b = run();
  CHECK(a.theta_m == b.theta_m);
  CHECK(a.omega_m == b.omega_m);
  CHECK(a.theta_l == b.theta_l);
  CHECK(a.omega_l == b.omega_l);
  CHECK(a.tau_l == b.tau_l);
}

TEST_CASE("rigid joints keep motor and load states identical") {
  PlantParams p = example_params();
  p.rigid_coupling = true;
  PlantState s;
  s.omega_m = s.omega_l = 2.0;
  for (int i = 0; i < 1000; ++i) {
    s = step(s, 0.5, 0.1, p, 2e-5);
    CHECK(s.theta_m == s.theta_l);
    CHECK(s.omega_m == s.omega_l);
  }
}
