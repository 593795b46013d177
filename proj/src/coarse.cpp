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

#include "nfba/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "nfba/numerics.hpp"

namespace nfba {
namespace {

// Scalar that tallies every arithmetic operation applied to it.
thread_local std::uint64_t t_ops = 0;

struct Counted {
  double v = 0.0;
  Counted() = default;
  Counted(double x) : v(x) {}  // NOLINT(google-explicit-constructor)
};

Counted operator+(Counted a, Counted b) { ++t_ops; return a.v + b.v; }
Counted operator-(Counted a, Counted b) { ++t_ops; return a.v - b.v; }
Counted operator*(Counted a, Counted b) { ++t_ops; return a.v * b.v; }
Counted operator/(Counted a, Counted b) { ++t_ops; return a.v / b.v; }
bool operator>(Counted a, Counted b) { ++t_ops; return a.v > b.v; }
Counted sqrt(Counted a) { ++t_ops; return std::sqrt(a.v); }
Counted abs(Counted a) { ++t_ops; return std::abs(a.v); }
Counted max(Counted a, Counted b) { ++t_ops; return std::max(a.v, b.v); }
Counted min(Counted a, Counted b) { ++t_ops; return std::min(a.v, b.v); }
double value(Counted a) { return a.v; }

double sqrt(double a) { return std::sqrt(a); }
double abs(double a) { return std::abs(a); }
double max(double a, double b) { return std::max(a, b); }
double min(double a, double b) { return std::min(a, b); }
double value(double a) { return a; }

// Flooring of a nonnegative value is an integer conversion, not arithmetic.
template <typename Real>
int floor_int(Real a) {
  return static_cast<int>(std::floor(value(a)));
}

template <typename Real>
std::vector<Real> energies_of(const ComplexVector& y) {
  std::vector<Real> e(static_cast<std::size_t>(y.size()));
  for (Eigen::Index m = 0; m < y.size(); ++m) {
    const Real re = y[m].real();
    const Real im = y[m].imag();
    e[static_cast<std::size_t>(m)] = re * re + im * im;
  }
  return e;
}

template <typename Real>
Real gain_from_energy(Real total, Real p_t, Real sigma2, int n) {
  const Real ey = (total - Real(n * value(sigma2))) / p_t;
  const Real inv_snr = sigma2 / p_t;
  const Real est = sqrt(inv_snr * inv_snr + ey * ey) - inv_snr;
  return max(est, Real(kGainFloor));
}

template <typename Real>
Real range_from_gain(Real gain, const ArrayConfig& cfg) {
  const double c = cfg.wavelength() * std::sqrt(static_cast<double>(cfg.n_antennas)) / (4.0 * kPi);
  const Real r = Real(c) / sqrt(gain);
  return min(max(r, Real(cfg.r_min)), Real(cfg.r_max));
}

// Sum of e over the circular 1-based range [lo, hi]; empty when hi < lo.
template <typename Real>
Real circular_sum(const std::vector<Real>& prefix, int lo, int hi, int n) {
  if (hi < lo) return Real(0.0);
  if (lo < 1) return (prefix[n] - prefix[lo - 1 + n]) + prefix[hi];
  if (hi > n) return (prefix[n] - prefix[lo - 1]) + prefix[hi - n];
  return prefix[hi] - prefix[lo - 1];
}

template <typename Real>
std::vector<Real> prefix_of(const std::vector<Real>& e) {
  std::vector<Real> prefix(e.size() + 1);
  prefix[0] = Real(0.0);
  for (std::size_t m = 1; m <= e.size(); ++m) prefix[m] = prefix[m - 1] + e[m - 1];
  return prefix;
}

template <typename Real>
P2Solution p2_core(const std::vector<Real>& e, const std::vector<Real>& prefix,
                   const std::vector<int>& g, Real gamma) {
  const int n = static_cast<int>(e.size());

  P2Solution best{0, 0.0};
  Real best_obj = Real(0.0);
  for (int i = 1; i <= n; ++i) {
    const int gi = g[i - 1];
    if (gi < 0 || 2 * gi + 1 > n) {
      throw std::invalid_argument(fmt::format("solve_p2: half width {} invalid for N = {}", gi, n));
    }
    Real obj;
    if (gi == 0) {
      obj = e[i - 1];
    } else {
      const Real left = circular_sum(prefix, i - gi, i - 1, n);
      const Real right = circular_sum(prefix, i + 1, i + gi, n);
      const Real total = circular_sum(prefix, i - gi, i + gi, n);
      obj = total - gamma * abs(left - right);
    }
    if (best.index == 0 || obj > best_obj) {
      best.index = i;
      best_obj = obj;
    }
  }
  best.objective = value(best_obj);
  return best;
}

template <typename Real>
std::vector<int> half_widths(Real inv_r, double epsilon, const ArrayConfig& cfg) {
  if (!(epsilon > 0.0)) throw std::domain_error("window half width: epsilon must be positive");
  const double b = 2.0 / (kPi * epsilon);
  std::vector<int> g(static_cast<std::size_t>(cfg.n_antennas));
  for (int i = 1; i <= cfg.n_antennas; ++i) {
    const Real a = Real(spread_coefficient(cfg.grid_angle(i), cfg)) * inv_r;
    g[i - 1] = floor_int(sqrt(a * (a + Real(b))));
  }
  return g;
}

template <typename Real>
CoarseResult coarse_kernel(const ComplexVector& y, double p_t_mw, const ArrayConfig& cfg,
                           double epsilon, double gamma) {
  if (y.size() != cfg.n_antennas) throw std::invalid_argument("coarse_align: length mismatch");
  if (!(p_t_mw > 0.0)) throw std::domain_error("coarse_align: transmit power must be positive");
  if (!(gamma >= 0.0)) throw std::domain_error("coarse_align: gamma must be nonnegative");
  const std::vector<Real> e = energies_of<Real>(y);
  const std::vector<Real> prefix = prefix_of(e);
  const Real gain = gain_from_energy(prefix.back(), Real(p_t_mw), Real(cfg.noise_mw()), cfg.n_antennas);
  const Real r = range_from_gain(gain, cfg);
  const Real inv_r = Real(1.0) / r;
  const std::vector<int> g = half_widths(inv_r, epsilon, cfg);
  const P2Solution sol = p2_core(e, prefix, g, Real(gamma));

  CoarseResult out;
  out.center_index = sol.index;
  out.half_width = g[sol.index - 1];
  out.range_est = value(r);
  out.angle_est = cfg.grid_angle(sol.index);
  out.gain_est = value(gain);
  out.objective = sol.objective;
  out.subspace = circular_window(sol.index, out.half_width, cfg.n_antennas);
  return out;
}

}  // namespace

double default_gamma(double p_t_mw, double exponent) {
  return p_t_mw / std::pow(10.0, exponent);
}

double estimate_channel_gain(const ComplexVector& y, double p_t_mw, double sigma2_mw) {
  if (!(p_t_mw > 0.0) || !(sigma2_mw > 0.0)) {
    throw std::domain_error("estimate_channel_gain: powers must be positive");
  }
  return gain_from_energy(prefix_of(energies_of<double>(y)).back(), p_t_mw, sigma2_mw, static_cast<int>(y.size()));
}

double estimate_range(double gain_est, const ArrayConfig& cfg) {
  if (!(gain_est > 0.0)) throw std::domain_error("estimate_range: gain must be positive");
  return range_from_gain(gain_est, cfg);
}

int window_half_width(int i, double r_hat, double epsilon, const ArrayConfig& cfg) {
  if (i < 1 || i > cfg.n_antennas) {
    throw std::out_of_range(fmt::format("window_half_width: index {} outside 1..{}", i,
                                        cfg.n_antennas));
  }
  if (!(r_hat > 0.0)) throw std::domain_error("window_half_width: range must be positive");
  return half_widths(1.0 / r_hat, epsilon, cfg)[i - 1];
}

P2Solution solve_p2(std::span<const double> energies, std::span<const int> widths, double gamma) {
  if (energies.size() != widths.size() || energies.empty()) {
    throw std::invalid_argument("solve_p2: energies and half widths must match and be nonempty");
  }
  const std::vector<double> e(energies.begin(), energies.end());
  return p2_core(e, prefix_of(e), std::vector<int>(widths.begin(), widths.end()), gamma);
}

P2Solution solve_p2(const ComplexVector& y, double r_hat, double epsilon, double gamma,
                    const ArrayConfig& cfg) {
  if (y.size() != cfg.n_antennas) throw std::invalid_argument("solve_p2: length mismatch");
  if (!(r_hat > 0.0)) throw std::domain_error("solve_p2: range must be positive");
  const std::vector<double> e = energies_of<double>(y);
  return p2_core(e, prefix_of(e), half_widths(1.0 / r_hat, epsilon, cfg), gamma);
}

CoarseResult coarse_align(const ComplexVector& y, double p_t_mw, const ArrayConfig& cfg,
                          double epsilon, double gamma) {
  return coarse_kernel<double>(y, p_t_mw, cfg, epsilon, gamma);
}

CoarseResult coarse_align_counted(const ComplexVector& y, double p_t_mw, const ArrayConfig& cfg,
                                  double epsilon, double gamma, std::uint64_t& flops) {
  const std::uint64_t start = t_ops;
  CoarseResult out = coarse_kernel<Counted>(y, p_t_mw, cfg, epsilon, gamma);
  flops = t_ops - start;
  return out;
}

}  // namespace nfba
