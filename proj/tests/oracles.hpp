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

#pragma once

// Reference implementations used only by tests. They share no code with the
// library: extended precision series, asymptotic expansions and adaptive
// quadrature.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

using ld = long double;

// Maclaurin series of int_0^x cos(t^2) dt and int_0^x sin(t^2) dt.
inline std::pair<ld, ld> fresnel_series(ld x) {
  ld c = 0, s = 0;
  ld pow = x;  // x^(2j+1) / j!
  for (int j = 0; j < 400; ++j) {
    const ld term = pow / (2 * j + 1);
    switch (j % 4) {
      case 0: c += term; break;
      case 1: s += term; break;
      case 2: c -= term; break;
      case 3: s -= term; break;
    }
    pow *= x * x / (j + 1);
    if (j > 8 && std::fabs(pow) < 1e-30L) break;
  }
  return {c, s};
}

// int_x^inf e^{i t^2} dt ~ -e^{i x^2} sum_k (2k-1)!! / ((2i)^(k+1) x^(2k+1)),
// truncated at the smallest term.
inline std::pair<ld, ld> fresnel_asymptotic(ld x) {
  using C = std::complex<ld>;
  const C two_i(0, 2);
  C sum = 0;
  C denom = two_i * x;  // (2i)^(k+1) x^(2k+1)
  ld dfact = 1;         // (2k-1)!!
  ld last = INFINITY;
  for (int k = 0; k < 200; ++k) {
    const C term = dfact / denom;
    if (std::abs(term) > last) break;
    last = std::abs(term);
    sum += term;
    dfact *= (2 * k + 1);
    denom *= two_i * x * x;
  }
  const C phase(std::cos(x * x), std::sin(x * x));
  const C tail = -phase * sum;
  const ld half = std::sqrt(std::numbers::pi_v<ld>) / 2;
  const C full = half * C(std::cos(std::numbers::pi_v<ld> / 4), std::sin(std::numbers::pi_v<ld> / 4));
  const C f = full - tail;
  return {f.real(), f.imag()};
}

// Series at 3 plus Gauss-Kronrod over [3, x].
inline std::pair<ld, ld> fresnel_quadrature(ld x) {
  const auto [c3, s3] = fresnel_series(3.0L);
  using boost::math::quadrature::gauss_kronrod;
  const double ci = gauss_kronrod<double, 61>::integrate(
      [](double t) { return std::cos(t * t); }, 3.0, static_cast<double>(x), 8, 1e-13);
  const double si = gauss_kronrod<double, 61>::integrate(
      [](double t) { return std::sin(t * t); }, 3.0, static_cast<double>(x), 8, 1e-13);
  return {c3 + ci, s3 + si};
}

inline std::pair<double, double> fresnel(double x) {
  const ld ax = std::fabs(static_cast<ld>(x));
  std::pair<ld, ld> r;
  if (ax <= 3) {
    r = fresnel_series(ax);
  } else if (ax >= 6) {
    r = fresnel_asymptotic(ax);
  } else {
    r = fresnel_quadrature(ax);
  }
  const double sign = x < 0 ? -1.0 : 1.0;
  return {sign * static_cast<double>(r.first), sign * static_cast<double>(r.second)};
}

// |sum_n exp(j phase_n)|^2 / N^2 with phases from the exact geometry, in
// extended precision.
inline double correlation(double theta, double r, int l, int n, double wavelength) {
  const ld d = wavelength / 2.0L;
  const ld k = 2 * std::numbers::pi_v<ld> / wavelength;
  ld re = 0, im = 0;
  for (int i = 1; i <= n; ++i) {
    const ld off = (2.0L * i - n - 1) / 2 * d;
    const ld rn = std::sqrt(static_cast<ld>(r) * r + off * off - 2 * static_cast<ld>(r) * off * theta);
    const ld ph = k * (rn - r + off * (theta + 2.0L * l / n));
    re += std::cos(ph);
    im += std::sin(ph);
  }
  return static_cast<double>((re * re + im * im) / (static_cast<ld>(n) * n));
}

}  // namespace oracle
