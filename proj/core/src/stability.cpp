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

#include "legsim/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "legsim/errors.hpp"

namespace legsim {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section minimisation of f on [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi, int iters = 60) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

}  // namespace

PopovCoeffs popov_coeffs(const PlantParams& p, double K_d) {
  PopovCoeffs c;
  c.a = p.J_l * p.J_m;
  c.b = p.J_m * p.B_l + p.J_l * p.B_m;
  c.c = p.J_m * p.K_w + p.J_l * p.K_w + p.B_l * p.B_m;
  c.d = p.K_w * (p.B_m + p.B_l + K_d);
  return c;
}

PopovPoint popov_point(const PopovCoeffs& k, double K_w, double omega) {
  const double w2 = omega * omega;
  const double re_den = k.a * w2 * w2 - k.c * w2;
  const double im_den = k.d - k.b * w2;
  const double D = re_den * re_den + w2 * im_den * im_den;
  if (D == 0.0) {
    throw NumericError("popov_point: pole on the imaginary axis at this frequency");
  }
  PopovPoint out;
  out.re = K_w * re_den / D;
  out.omega_im = -K_w * w2 * im_den / D;
  return out;
}

double popov_crossing_frequency(const PopovCoeffs& c) { return std::sqrt(c.d / c.b); }

double kvs_max_closed_form_raw(const PlantParams& p, double K_d) {
  const double u = p.B_m + p.B_l + K_d;
  const double b = p.J_m * p.B_l + p.J_l * p.B_m;
  const double c = p.J_m * p.K_w + p.J_l * p.K_w + p.B_l * p.B_m;
  return c * u / b - p.J_m * p.J_l * p.K_w * u * u / (b * b);
}

double kvs_max_closed_form(const PlantParams& p, double K_d) {
  const double k = kvs_max_closed_form_raw(p, K_d);
  if (k <= 0.0) {
    std::ostringstream msg;
    msg << "no certified stiffness range at this K_d (" << K_d << ")";
    throw std::domain_error(msg.str());
  }
  return k;
}

std::vector<double> make_omega_grid(const PopovCoeffs& c, int decades, int points_per_decade) {
  const double w0 = popov_crossing_frequency(c);
  const int n = decades * points_per_decade + 1;
  std::vector<double> grid(n);
  const double lo = std::log10(w0) - decades / 2.0;
  const double step = static_cast<double>(decades) / (n - 1);
  for (int i = 0; i < n; ++i) grid[i] = std::pow(10.0, lo + step * i);
  return grid;
}

double kvs_max_from_locus(const std::function<PopovPoint(double)>& locus,
                          const std::vector<double>& omega_grid) {
  const int n = static_cast<int>(omega_grid.size());
  if (n < 16) throw std::invalid_argument("kvs_max_from_locus: omega grid too small");

  std::vector<double> X(n), Y(n);
  double xmax = 0.0, ymax = 0.0;
  for (int i = 0; i < n; ++i) {
    const PopovPoint p = locus(omega_grid[i]);
    X[i] = p.re;
    Y[i] = p.omega_im;
    xmax = std::fmax(xmax, std::fabs(X[i]));
    ymax = std::fmax(ymax, std::fabs(Y[i]));
  }

  // Supporting abscissa for slope q: the x-axis intercept of the lowest line
  // of that slope touching the locus, min over omega of X - q Y. The grid
  // minimiser is polished by golden-section between its neighbours. A
  // minimiser pinned at a grid edge is legitimate when the curve has gone
  // flat there (the locus endpoint is the infimum); a steep pinned edge
  // means the grid missed the feature.
  auto supporting_abscissa = [&](double q, bool check_boundary) -> double {
    int imin = 0;
    double best = X[0] - q * Y[0];
    for (int i = 1; i < n; ++i) {
      const double g = X[i] - q * Y[i];
      if (g < best) {
        best = g;
        imin = i;
      }
    }
    if (check_boundary && best < 0.0 && (imin == 0 || imin == n - 1)) {
      const int nb = imin == 0 ? 1 : n - 2;
      const double neighbour = X[nb] - q * Y[nb];
      if (std::fabs(best - neighbour) > 1e-2 * std::fabs(best)) {
        throw NumericError("kvs_max_numeric: omega grid too coarse (minimizer at grid boundary)");
      }
    }
    const double lo = omega_grid[std::max(imin - 1, 0)];
    const double hi = omega_grid[std::min(imin + 1, n - 1)];
    const double refined = golden_min(
        [&](double w) {
          const PopovPoint p = locus(w);
          return p.re - q * p.omega_im;
        },
        lo, hi);
    return std::min(best, refined);
  };

  // m(q) is concave (a pointwise min of affine functions of q), so a coarse
  // log ladder over both signs followed by golden-section finds its maximum.
  const double qscale = ymax > 0.0 ? xmax / ymax : 1.0;
  std::vector<double> candidates;
  candidates.push_back(0.0);
  for (int k = -40; k <= 40; ++k) {
    const double q = qscale * std::pow(10.0, k / 8.0);
    candidates.push_back(q);
    candidates.push_back(-q);
  }
  std::sort(candidates.begin(), candidates.end());

  int jbest = 0;
  double mbest = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(candidates.size()); ++j) {
    const double m = supporting_abscissa(candidates[j], false);
    if (m > mbest) {
      mbest = m;
      jbest = j;
    }
  }
  const double qlo = candidates[std::max(jbest - 1, 0)];
  const double qhi = candidates[std::min(jbest + 1, static_cast<int>(candidates.size()) - 1)];
  const double mrefined =
      -golden_min([&](double q) { return -supporting_abscissa(q, false); }, qlo, qhi, 70);
  double m = std::fmax(mbest, mrefined);

  // Re-evaluate the winner with the boundary check active.
  if (m >= 0.0) return std::numeric_limits<double>::infinity();

  const double qstar = [&] {
    double best_q = candidates[jbest];
    double best_m = mbest;
    for (double q : {qlo + (qhi - qlo) * (1.0 - kGolden), qlo + (qhi - qlo) * kGolden}) {
      const double mq = supporting_abscissa(q, false);
      if (mq > best_m) {
        best_m = mq;
        best_q = q;
      }
    }
    return best_q;
  }();
  m = std::fmax(m, supporting_abscissa(qstar, true));
  return -1.0 / m;
}

double kvs_max_numeric(const PlantParams& p, double K_d, const std::vector<double>& grid) {
  const PopovCoeffs k = popov_coeffs(p, K_d);
  // Routh: the non-integrator factor of the denominator must be Hurwitz,
  // which is exactly where the closed form is positive.
  if (k.b * k.c <= k.a * k.d) {
    std::ostringstream msg;
    msg << "no certified stiffness range at this K_d (" << K_d << ")";
    throw std::domain_error(msg.str());
  }
  auto locus = [&](double w) -> PopovPoint {
    const std::complex<double> s(0.0, w);
    const std::complex<double> den = (((k.a * s + k.b) * s + k.c) * s + k.d) * s;
    const std::complex<double> P = p.K_w / den;
    return {P.real(), w * P.imag()};
  };
  return kvs_max_from_locus(locus, grid);
}

double kvs_max_numeric(const PlantParams& p, double K_d) {
  return kvs_max_numeric(p, K_d, make_omega_grid(popov_coeffs(p, K_d)));
}

StabilityReport certify_schedule(const GainSchedule& sched, const PlantParams& params,
                                 const LegGeometry& geom, const CertifyOptions& opt) {
  sched.validate();
  params.validate("knee");
  geom.validate();
  if (params.rigid_coupling) {
    throw std::invalid_argument("certify_schedule: Popov model requires the wire joint");
  }
  if (opt.margin <= 0.0 || opt.margin > 1.0) {
    throw std::invalid_argument("certify_schedule: margin must be in (0, 1]");
  }

  StabilityReport rep;

  // Worst-case Jacobian over the shrunk workspace annulus. Singular values
  // depend only on the knee angle, so a 1-D scan suffices.
  const double r_lo = geom.r_min() + opt.workspace_margin;
  const double r_hi = geom.r_max() - opt.workspace_margin;
  double sigma_sq = 0.0;
  const int n_scan = 400;
  for (int i = 0; i <= n_scan; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / n_scan;
    const JointAngles q = inverse_kinematics(Vec2{0.0, r}, geom);
    const double s = jacobian(q.hip, q.knee, geom).sigma_max();
    sigma_sq = std::fmax(sigma_sq, s * s);
  }
  rep.sigma_max_sq = sigma_sq;
  const double kvs_cart_peak =
      sched.mode == ScheduleMode::kLinear ? sched.K_vs1 : sched.K_vs1 + sched.K_vs2;
  rep.kvs_joint_peak = kvs_cart_peak * sigma_sq;

  const double kd_cart_lo = sched.K_d1;
  const double kd_cart_hi =
      sched.mode == ScheduleMode::kNonlinear ? sched.K_d1 + sched.K_d2 : sched.K_d1;

  double min_bound = std::numeric_limits<double>::infinity();
  const int n_kd = std::max(opt.kd_scan_points, 2);
  for (int i = 0; i < n_kd; ++i) {
    const double kd_cart = kd_cart_lo + (kd_cart_hi - kd_cart_lo) * i / (n_kd - 1);
    const double kd_joint = kd_cart * sigma_sq;
    const double closed = kvs_max_closed_form_raw(params, kd_joint);
    double bound;
    double numeric = 0.0;
    if (closed <= 0.0) {
      bound = 0.0;
    } else {
      const PopovCoeffs coeffs = popov_coeffs(params, kd_joint);
      numeric = kvs_max_numeric(params, kd_joint,
                                make_omega_grid(coeffs, opt.omega_decades,
                                                opt.omega_points_per_decade));
      bound = std::fmin(closed, numeric);
    }
    if (bound < min_bound) {
      min_bound = bound;
      rep.kd_joint_worst = kd_joint;
      rep.kvs_max_closed = closed;
      rep.kvs_max_numeric = numeric;
    }
  }

  const PopovCoeffs worst = popov_coeffs(params, rep.kd_joint_worst);
  rep.omega_0 = popov_crossing_frequency(worst);
  rep.re_at_omega0 = popov_point(worst, params.K_w, rep.omega_0).re;
  rep.closed_form_supported =
      rep.kvs_max_closed > 0.0 &&
      std::fabs(rep.kvs_max_numeric - rep.kvs_max_closed) <= opt.agreement_tol * rep.kvs_max_closed;

  std::ostringstream msg;
  if (min_bound <= 0.0) {
    rep.margin_used = std::numeric_limits<double>::infinity();
    rep.certified = false;
    msg << "not certified: no stiffness range at joint-space K_d = " << rep.kd_joint_worst;
  } else {
    rep.margin_used = rep.kvs_joint_peak / min_bound;
    rep.certified = rep.margin_used <= opt.margin * (1.0 + 1e-12);
    if (rep.certified) {
      msg << "certified: K_vs peak " << rep.kvs_joint_peak << " N m/rad uses "
          << rep.margin_used << " of the bound " << min_bound << " at K_d = "
          << rep.kd_joint_worst;
    } else {
      msg << "not certified: K_vs peak " << rep.kvs_joint_peak << " N m/rad vs bound "
          << min_bound << " at K_d = " << rep.kd_joint_worst << " (ratio " << rep.margin_used
          << " > margin " << opt.margin << ")";
    }
  }
  // The Popov criterion is sufficient only: failure means "not certified",
  // never "unstable".
  rep.message = msg.str();
  return rep;
}

}  // namespace legsim
