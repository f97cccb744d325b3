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

// Minimal fixed-size planar vector/matrix types. The whole model is a
// two-joint planar leg, so 2x2 is all the linear algebra the core needs.

#ifndef LEGSIM_VEC2_HPP_
#define LEGSIM_VEC2_HPP_

#include <cmath>

namespace legsim {

struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  Vec2() = default;
  Vec2(double x_, double z_) : x(x_), z(z_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, z + o.z}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, z - o.z}; }
  Vec2 operator*(double s) const { return {x * s, z * s}; }
  Vec2 operator-() const { return {-x, -z}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    z += o.z;
    return *this;
  }

  double dot(const Vec2& o) const { return x * o.x + z * o.z; }
  double norm() const { return std::sqrt(x * x + z * z); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Column-major 2x2: [a b; c d] maps (x,z) -> (a*x + b*z, c*x + d*z).
struct Mat2 {
  double a = 0.0, b = 0.0;
  double c = 0.0, d = 0.0;

  Mat2() = default;
  Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(double k1, double k2) { return {k1, 0.0, 0.0, k2}; }

  Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.z, c * v.x + d * v.z}; }
  Mat2 transposed() const { return {a, c, b, d}; }
  double det() const { return a * d - b * c; }

  Mat2 inverse() const {
    const double det_ = det();
    return {d / det_, -b / det_, -c / det_, a / det_};
  }

  // Columns as vectors.
  Vec2 col0() const { return {a, c}; }
  Vec2 col1() const { return {b, d}; }

  // Largest/smallest singular value via the 2x2 Gram matrix eigenvalues.
  double sigma_max() const {
    const double t = a * a + b * b + c * c + d * d;
    const double dd = det();
    const double disc = std::sqrt(std::fmax(0.0, t * t - 4.0 * dd * dd));
    return std::sqrt(0.5 * (t + disc));
  }
  double sigma_min() const {
    const double t = a * a + b * b + c * c + d * d;
    const double dd = det();
    const double disc = std::sqrt(std::fmax(0.0, t * t - 4.0 * dd * dd));
    return std::sqrt(std::fmax(0.0, 0.5 * (t - disc)));
  }
};

}  // namespace legsim

#endif  // LEGSIM_VEC2_HPP_
