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

#include "legsim/kinematics.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "legsim/errors.hpp"

using namespace legsim;

namespace {
const LegGeometry kGeom{};  // Table-default 0.225 / 0.125, knee_sign +1
}

TEST_CASE("forward kinematics: extension and right-angle knee") {
  const Vec2 extended = forward_kinematics(0.3, 0.0, kGeom);
  CHECK(extended.norm() == doctest::Approx(0.35).epsilon(1e-12));

  const Vec2 right = forward_kinematics(-0.2, M_PI / 2.0, kGeom);
  CHECK(right.norm() == doctest::Approx(std::sqrt(0.225 * 0.225 + 0.125 * 0.125)).epsilon(1e-12));
  CHECK(right.norm() == doctest::Approx(0.2574).epsilon(1e-3));
}

TEST_CASE("inverse kinematics: branches, round trips, workspace errors") {
  // Full extension and full fold (acos at the domain edge is sqrt-accurate).
  const JointAngles ext = inverse_kinematics(Vec2{0.0, kGeom.r_max()}, kGeom);
  CHECK(std::fabs(ext.knee) < 1e-6);
  const JointAngles fold = inverse_kinematics(Vec2{0.05, std::sqrt(0.1 * 0.1 - 0.05 * 0.05)}, kGeom);
  CHECK(fold.knee == doctest::Approx(M_PI).epsilon(1e-6));

  // r = 0.3 target round-trips through FK.
  const Vec2 target{0.12, std::sqrt(0.3 * 0.3 - 0.12 * 0.12)};
  const JointAngles q = inverse_kinematics(target, kGeom);
  const Vec2 back = forward_kinematics(q.hip, q.knee, kGeom);
  CHECK((back - target).norm() < 1e-12);

  CHECK_THROWS_AS(inverse_kinematics(Vec2{0.0, 0.4}, kGeom), WorkspaceError);
  CHECK_THROWS_AS(inverse_kinematics(Vec2{0.0, 0.05}, kGeom), WorkspaceError);
  try {
    inverse_kinematics(Vec2{0.0, 0.4}, kGeom);
  } catch (const WorkspaceError& e) {
    CHECK(e.r_requested == doctest::Approx(0.4));
    CHECK(e.r_min == doctest::Approx(0.1));
    CHECK(e.r_max == doctest::Approx(0.35));
  }

  // Round trip on 100 random reachable targets, both knee branches.
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ur(0.105, 0.345);
  std::uniform_real_distribution<double> ua(-1.2, 1.2);
  for (int branch : {1, -1}) {
    LegGeometry g = kGeom;
    g.knee_sign = branch;
    for (int i = 0; i < 100; ++i) {
      const double r = ur(rng);
      const double a = ua(rng);
      const Vec2 x{r * std::sin(a), r * std::cos(a)};
      const JointAngles qq = inverse_kinematics(x, g);
      CHECK((forward_kinematics(qq.hip, qq.knee, g) - x).norm() < 1e-12);
    }
  }
}

TEST_CASE("jacobian matches central finite differences") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uh(-1.5, 1.5);
  std::uniform_real_distribution<double> uk(0.05, M_PI - 0.05);
  const double h = 1e-6;
  double max_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double hip = uh(rng);
    const double knee = uk(rng);
    const Mat2 J = jacobian(hip, knee, kGeom);
    const Vec2 dh = (forward_kinematics(hip + h, knee, kGeom) -
                     forward_kinematics(hip - h, knee, kGeom)) *
                    (1.0 / (2.0 * h));
    const Vec2 dk = (forward_kinematics(hip, knee + h, kGeom) -
                     forward_kinematics(hip, knee - h, kGeom)) *
                    (1.0 / (2.0 * h));
    max_err = std::fmax(max_err, std::fabs(J.a - dh.x));
    max_err = std::fmax(max_err, std::fabs(J.c - dh.z));
    max_err = std::fmax(max_err, std::fabs(J.b - dk.x));
    max_err = std::fmax(max_err, std::fabs(J.d - dk.z));
  }
  CHECK(max_err < 1e-6);
}

TEST_CASE("jacobian determinant: singular at extension, maximal near right angle") {
  CHECK(std::fabs(jacobian(0.4, 0.0, kGeom).det()) < 1e-15);
  CHECK(std::fabs(jacobian(0.4, M_PI, kGeom).det()) < 1e-12);
  // |det| = l1 l2 sin(knee).
  for (double knee : {0.3, 0.8, 1.2, 2.0, 2.8}) {
    CHECK(std::fabs(jacobian(-0.7, knee, kGeom).det()) ==
          doctest::Approx(kGeom.l1 * kGeom.l2 * std::sin(knee)).epsilon(1e-9));
  }
  const double near_right = std::fabs(jacobian(0.0, M_PI / 2.0, kGeom).det());
  for (double knee : {0.2, 0.6, 2.4, 3.0}) {
    CHECK(std::fabs(jacobian(0.0, knee, kGeom).det()) < near_right);
  }
}

TEST_CASE("jacobian_dot matches finite differences of the jacobian") {
  const double hip = 0.4, knee = 1.1, wh = 0.8, wk = -1.3;
  const double h = 1e-6;
  auto at = [&](double t) { return jacobian(hip + wh * t, knee + wk * t, kGeom); };
  const Mat2 fd_plus = at(h), fd_minus = at(-h);
  const Mat2 Jd = jacobian_dot(hip, knee, wh, wk, kGeom);
  CHECK(Jd.a == doctest::Approx((fd_plus.a - fd_minus.a) / (2 * h)).epsilon(1e-6));
  CHECK(Jd.b == doctest::Approx((fd_plus.b - fd_minus.b) / (2 * h)).epsilon(1e-6));
  CHECK(Jd.c == doctest::Approx((fd_plus.c - fd_minus.c) / (2 * h)).epsilon(1e-6));
  CHECK(Jd.d == doctest::Approx((fd_plus.d - fd_minus.d) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("radial error coordinates") {
  FootState a = FootState::from_cartesian(Vec2{0.0, 0.30}, Vec2{0.0, -0.1});
  FootState b = FootState::from_cartesian(Vec2{0.0, 0.28}, Vec2{0.0, 0.05});
  const RadialError zero = radial_error(a, a);
  CHECK(zero.position == 0.0);
  CHECK(zero.velocity == 0.0);

  const RadialError e = radial_error(a, b);
  CHECK(e.position == doctest::Approx(0.02).epsilon(1e-12));

  const RadialError r = radial_error(b, a);
  CHECK(e.position == doctest::Approx(-r.position));
  CHECK(e.velocity == doctest::Approx(-r.velocity));
}

TEST_CASE("foot state radial rate matches differentiated radius") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 x{0.1 + 0.2 * std::fabs(u(rng)), 0.1 + 0.2 * std::fabs(u(rng))};
    const Vec2 v{u(rng), u(rng)};
    const FootState f = FootState::from_cartesian(x, v);
    const double h = 1e-7;
    const double r_plus = (x + v * h).norm();
    const double r_minus = (x - v * h).norm();
    CHECK(f.rdot == doctest::Approx((r_plus - r_minus) / (2 * h)).epsilon(1e-6));
    CHECK(f.r == doctest::Approx(x.norm()));
  }
}
