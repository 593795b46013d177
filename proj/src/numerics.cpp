// Copyright 2026 The nfba Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nfba/numerics.hpp"

#include <complex>
#include <cstdio>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <fmt/format.h>

namespace nfba {
namespace {

constexpr double kSeriesLimit = 1.8;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 300;

CornuPoint fresnel_series(double x) {
  // C = sum (-1)^k x^(4k+1) / ((4k+1)(2k)!), S = sum (-1)^k x^(4k+3) / ((4k+3)(2k+1)!)
  const double x2 = x * x;
  const double x4 = x2 * x2;
  double c = 0.0;
  double s = 0.0;
  double term = x;  // x^(4k+1) / (2k)! with sign
  for (int k = 0; k < kMaxIter; ++k) {
    const double c_term = term / (4.0 * k + 1.0);
    const double s_pow = term * x2 / (2.0 * k + 1.0);  // x^(4k+3) / (2k+1)!
    const double s_term = s_pow / (4.0 * k + 3.0);
    c += c_term;
    s += s_term;
    if (std::abs(c_term) <= kEps * std::abs(c) && std::abs(s_term) <= kEps * std::abs(s)) {
      break;
    }
    term *= -x4 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
  }
  return {c, s};
}

// Modified Lentz evaluation of the erfc continued fraction, written in the
// pi/2-normalized variable t and rescaled to the unnormalized convention.
CornuPoint fresnel_continued_fraction(double x) {
  using cplx = std::complex<double>;
  const double t = x * std::sqrt(2.0 / kPi);
  const double pix2 = 2.0 * x * x;  // pi t^2
  constexpr double kTiny = std::numeric_limits<double>::min() * 1e10;

  cplx b(1.0, -pix2);
  cplx cc(1.0 / kTiny, 0.0);
  cplx d = 1.0 / b;
  cplx h = d;
  double n = -1.0;
  for (int k = 2; k <= kMaxIter; ++k) {
    n += 2.0;
    const double a = -n * (n + 1.0);
    b += 4.0;
    d = 1.0 / (a * d + b);
    cc = b + a / cc;
    const cplx del = cc * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  h *= cplx(t, -t);
  const cplx phase(std::cos(x * x), std::sin(x * x));
  const cplx cs = cplx(0.5, 0.5) * (1.0 - phase * h);
  const double scale = std::sqrt(kPi / 2.0);
  return {scale * cs.real(), scale * cs.imag()};
}

// r^(n) - r computed without cancellation for large r.
double path_difference(double r, double offset_m, double theta) {
  const double num = offset_m * offset_m - 2.0 * r * offset_m * theta;
  const double rn = std::sqrt(r * r + num);
  return num / (rn + r);
}

std::once_flag g_validity_warning;

}  // namespace

CornuPoint fresnel(double x) {
  if (!std::isfinite(x)) throw std::domain_error("fresnel: non-finite argument");
  const double ax = std::abs(x);
  const CornuPoint p = ax <= kSeriesLimit ? fresnel_series(ax) : fresnel_continued_fraction(ax);
  return x < 0.0 ? CornuPoint{-p.c, -p.s} : p;
}

CornuFrame cornu_frame(double t) {
  const double phase = t * t;
  CornuFrame f;
  f.tangent = {std::cos(phase), std::sin(phase)};
  f.normal = {-std::sin(phase), std::cos(phase)};
  f.curvature = 2.0 * t;
  f.radius = t == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / f.curvature;
  return f;
}

Vec2 osculating_center(double t, std::optional<double> radius_override) {
  if (!(t > 0.0)) throw std::domain_error("osculating_center: t must be positive");
  const CornuPoint p = fresnel(t);
  const CornuFrame f = cornu_frame(t);
  const double radius = radius_override.value_or(f.radius);
  return {p.c + radius * f.normal.x, p.s + radius * f.normal.y};
}

SpreadParams spread_params(double theta, double r, int l, const ArrayConfig& cfg) {
  if (!(r > 0.0)) throw std::domain_error("spread_params: range must be positive");
  if (!(std::abs(theta) < 1.0)) throw std::domain_error("spread_params: |theta| must be < 1");
  const int n = cfg.n_antennas;
  const double s = cfg.spacing() * (1.0 - theta * theta) / (2.0 * r);
  if (!(n * s < 1.0)) {
    throw std::domain_error(
        fmt::format("spread_params: N s = {} violates the aperture << range assumption", n * s));
  }
  const double root = std::sqrt(kPi * s);
  return {s, n * root, root * (l / (n * s) - n / 2.0)};
}

double rho_exact(double theta, double r, int l, const ArrayConfig& cfg) {
  if (!(r > 0.0)) throw std::domain_error("rho_exact: range must be positive");
  const int n = cfg.n_antennas;
  const double k = 2.0 * kPi / cfg.wavelength();
  const double d = cfg.spacing();
  const double steered = theta + 2.0 * l / n;
  double re = 0.0;
  double im = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double offset = cfg.element_offset(i) * d;
    const double phase = k * (path_difference(r, offset, theta) + offset * steered);
    re += std::cos(phase);
    im += std::sin(phase);
  }
  return (re * re + im * im) / (static_cast<double>(n) * n);
}

double rho_fresnel_s(double s_param, int l, int n_antennas) {
  const int al = l < 0 ? -l : l;
  const double root = std::sqrt(kPi * s_param);
  const double delta = n_antennas * root;
  const double w = root * (al / (n_antennas * s_param) - n_antennas / 2.0);
  const CornuPoint lo = fresnel(w);
  const CornuPoint hi = fresnel(w + delta);
  const double dc = hi.c - lo.c;
  const double ds = hi.s - lo.s;
  return (dc * dc + ds * ds) / (delta * delta);
}

double rho_fresnel(double theta, double r, int l, const ArrayConfig& cfg) {
  const SpreadParams p = spread_params(theta, r, 0, cfg);
  return rho_fresnel_s(p.s_param, l, cfg.n_antennas);
}

double rho_upper_bound(double w, double delta) {
  if (!(w > 0.0)) throw std::domain_error("rho_upper_bound: requires w > 0");
  const double q = w * (w + delta);
  return 1.0 / (q * q);
}

double rho_upper_bound(double theta, double r, int l, const ArrayConfig& cfg) {
  const SpreadParams p = spread_params(theta, r, l, cfg);
  return rho_upper_bound(p.w, p.delta);
}

int half_width_from_ratio(double a, double epsilon) {
  if (!(epsilon > 0.0)) throw std::domain_error("half width: epsilon must be positive");
  if (!(a >= 0.0)) throw std::domain_error("half width: spread ratio must be nonnegative");
  return static_cast<int>(std::floor(std::sqrt(a * (a + 2.0 / (kPi * epsilon)))));
}

int spread_half_width(double delta, double epsilon) {
  if (!(delta > 0.0)) throw std::domain_error("spread_half_width: delta must be positive");
  return half_width_from_ratio(delta * delta / (2.0 * kPi), epsilon);
}

double spread_coefficient(double theta, const ArrayConfig& cfg) {
  const double n = cfg.n_antennas;
  return n * n * cfg.spacing() * (1.0 - theta * theta) / 4.0;
}

int half_width_at(double theta, double r, double epsilon, const ArrayConfig& cfg) {
  if (!(r > 0.0)) throw std::domain_error("half_width_at: range must be positive");
  return half_width_from_ratio(spread_coefficient(theta, cfg) * (1.0 / r), epsilon);
}

double subspace_validity_bound(double s_param, int n_antennas) {
  const double ns = n_antennas * s_param;
  return 4.0 * s_param / (kPi * (1.0 - ns * ns));
}

std::vector<int> circular_window(int center, int half_width, int n_antennas) {
  std::vector<int> out;
  out.reserve(2 * half_width + 1);
  for (int l = -half_width; l <= half_width; ++l) {
    int idx = (center - 1 + l) % n_antennas;
    if (idx < 0) idx += n_antennas;
    out.push_back(idx + 1);
  }
  return out;
}

std::vector<int> epsilon_subspace(int center, double r, double epsilon, const ArrayConfig& cfg) {
  if (center < 1 || center > cfg.n_antennas) {
    throw std::out_of_range(fmt::format("epsilon_subspace: center {} out of range", center));
  }
  const double theta = cfg.grid_angle(center);
  const double s = cfg.spacing() * (1.0 - theta * theta) / (2.0 * r);
  if (!(subspace_validity_bound(s, cfg.n_antennas) < epsilon)) {
    std::call_once(g_validity_warning, [&] {
      std::fprintf(stderr,
                   "nfba: warning: subspace validity bound %.3g is not below epsilon %.3g\n",
                   subspace_validity_bound(s, cfg.n_antennas), epsilon);
    });
  }
  return circular_window(center, half_width_at(theta, r, epsilon, cfg), cfg.n_antennas);
}

}  // namespace nfba
