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

#include "nfba/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nfba/flops.hpp"
#include "nfba/numerics.hpp"

namespace nfba {

BeamDecision ls_baseline(const ComplexVector& y, double p_t_mw, const DftCodebook& dft,
                         const ArrayConfig& cfg) {
  if (!(p_t_mw > 0.0)) throw std::domain_error("ls_baseline: transmit power must be positive");
  BeamDecision d;
  d.scheme = "ls";
  d.pilot_symbols = flops::pilots::ls(cfg.n_antennas);
  const ComplexVector h_hat = dft.synthesize(y) / std::sqrt(p_t_mw);
  const double norm = h_hat.norm();
  d.beam = norm > 0.0 ? ComplexVector(h_hat / norm)
                      : dft_column(nearest_grid_index(0.0, cfg), cfg);
  return d;
}

BeamDecision polar_exhaustive(std::span<const Complex> correlations, double p_t_mw,
                              double sigma2_mw, const PolarCodebook& codebook, KeyedRng& rng) {
  if (correlations.size() != static_cast<std::size_t>(codebook.size())) {
    throw std::invalid_argument("polar_exhaustive: correlation count mismatch");
  }
  const double amp = std::sqrt(p_t_mw);
  const double scale = std::sqrt(sigma2_mw / 2.0);
  int best = 0;
  double best_mag = -1.0;
  for (int k = 0; k < codebook.size(); ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    const Complex z = amp * correlations[k] + Complex(scale * re, scale * im);
    const double mag = std::abs(z);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  BeamDecision d;
  d.scheme = "polar-exh";
  d.pilot_symbols = codebook.size();
  d.beam = codebook.column(best);
  return d;
}

BeamDecision polar_exhaustive(const ComplexVector& h, double p_t_mw, double sigma2_mw,
                              const PolarCodebook& codebook, KeyedRng& rng) {
  const std::vector<Complex> c = codebook.correlate(h);
  return polar_exhaustive(c, p_t_mw, sigma2_mw, codebook, rng);
}

double genie_polar_best(std::span<const Complex> correlations, double h_norm) {
  if (!(h_norm > 0.0)) throw std::domain_error("genie_polar_best: zero channel");
  double best = 0.0;
  for (const Complex& c : correlations) best = std::max(best, std::abs(c) / h_norm);
  return best;
}

double genie_polar_best(const ComplexVector& h, const PolarCodebook& codebook) {
  const std::vector<Complex> c = codebook.correlate(h);
  return genie_polar_best(c, h.norm());
}

AswjeEstimator::AswjeEstimator(const ArrayConfig& cfg, const AswjeConfig& acfg)
    : cfg_(cfg), acfg_(acfg), half_(cfg.n_antennas / 2) {
  if (!(acfg_.kappa2 > 0.0 && acfg_.kappa2 < 1.0)) {
    throw std::invalid_argument("aswje: kappa2 must lie in (0, 1)");
  }
  if (acfg_.k_a < 1 || acfg_.k_a > 3) throw std::invalid_argument("aswje: k_a must be 1..3");
  if (!(acfg_.step > 0.0)) throw std::invalid_argument("aswje: step must be positive");
  const double d = cfg_.spacing();
  const double lim = 1.0 - acfg_.theta_limit * acfg_.theta_limit;
  k_lo_ = static_cast<int>(std::ceil(std::sqrt(cfg_.r_min / d) / acfg_.step));
  k_hi_ = static_cast<int>(std::floor(std::sqrt(cfg_.r_max / (d * lim)) / acfg_.step));
  // The correlation model needs N s < 1 with s = 1 / (2 varpi^2).
  const int k_valid = static_cast<int>(std::floor(std::sqrt(cfg_.n_antennas / 2.0) / acfg_.step)) + 1;
  k_lo_ = std::max(k_lo_, k_valid);
  table_.assign(static_cast<std::size_t>(k_hi_ + 1) * (half_ + 1), 0.0);
  for (int k = k_lo_; k <= k_hi_; ++k) {
    const double varpi = k * acfg_.step;
    const double s = 1.0 / (2.0 * varpi * varpi);
    const double rho0 = rho_fresnel_s(s, 0, cfg_.n_antennas);
    for (int l = 0; l <= half_; ++l) {
      table_[static_cast<std::size_t>(k) * (half_ + 1) + l] =
          std::sqrt(rho_fresnel_s(s, l, cfg_.n_antennas) / rho0);
    }
  }
}

double AswjeEstimator::varpi_min() const { return std::sqrt(cfg_.r_min / cfg_.spacing()); }
double AswjeEstimator::varpi_max() const { return std::sqrt(cfg_.r_max / cfg_.spacing()); }

std::vector<int> AswjeEstimator::support(const ComplexVector& y) const {
  double peak = 0.0;
  int arg = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y[i]);
    if (a > peak) {
      peak = a;
      arg = static_cast<int>(i);
    }
  }
  std::vector<int> b;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) > acfg_.kappa2 * peak) b.push_back(static_cast<int>(i) + 1);
  }
  if (b.empty()) b.push_back(arg + 1);
  return b;
}

double AswjeEstimator::demap_range(const ComplexVector& y, std::span<const int> support,
                                   int center) const {
  const int n = cfg_.n_antennas;
  const double theta = cfg_.grid_angle(center);
  const double geom = cfg_.spacing() * (1.0 - theta * theta);
  const double ref = std::abs(y[center - 1]);
  // Ranges are searched from far to near so an uninformative support picks r_max.
  const int k_top = std::min(k_hi_, static_cast<int>(std::floor(std::sqrt(cfg_.r_max / geom) / acfg_.step)));
  const int k_bot = std::max(k_lo_, static_cast<int>(std::ceil(std::sqrt(cfg_.r_min / geom) / acfg_.step)));
  if (!(ref > 0.0) || k_bot > k_top) return cfg_.r_max;

  // Fit the ratio profile over the support span plus one column on each side,
  // so the first sub-threshold neighbours also constrain the spread.
  int width = 0;
  for (int i : support) {
    int l = i - center;
    if (l > n / 2) l -= n;
    if (l < -n / 2) l += n;
    width = std::max(width, std::abs(l));
  }
  if (width == 0) return cfg_.r_max;
  width = std::min(width + 1, half_);
  std::vector<int> offsets;
  std::vector<double> measured;
  for (int l = -width; l <= width; ++l) {
    if (l == 0) continue;
    const int i = ((center - 1 + l) % n + n) % n;
    offsets.push_back(std::abs(l));
    measured.push_back(std::abs(y[i]) / ref);
  }
  int best_k = k_top;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int k = k_top; k >= k_bot; --k) {
    double cost = 0.0;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const double e = measured[j] - ratio(k, offsets[j]);
      cost += e * e;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_k = k;
    }
  }
  const double varpi = best_k * acfg_.step;
  return std::clamp(varpi * varpi * geom, cfg_.r_min, cfg_.r_max);
}

BeamDecision AswjeEstimator::estimate(const ComplexVector& y, const ComplexVector& h,
                                      double p_t_mw, double sigma2_mw, KeyedRng& probe_rng) const {
  const int n = cfg_.n_antennas;
  if (y.size() != n || h.size() != n) throw std::invalid_argument("aswje: length mismatch");
  const std::vector<int> b = support(y);
  const int med = b[(b.size() - 1) / 2];

  BeamDecision d;
  d.scheme = "aswje";
  d.pilot_symbols = acfg_.k_a == 1 ? n : flops::pilots::aswje(n, acfg_.k_a);
  const int offsets[3] = {0, -1, 1};
  double best_mag = -1.0;
  for (int c = 0; c < acfg_.k_a; ++c) {
    int center = med + offsets[c];
    if (center < 1) center += n;
    if (center > n) center -= n;
    const double r = demap_range(y, b, center);
    const double theta = cfg_.grid_angle(center);
    const ComplexVector beam = steering_vector(theta, r, cfg_);
    double mag = 0.0;
    if (acfg_.k_a > 1) {
      const double scale = std::sqrt(sigma2_mw / 2.0);
      const double re = probe_rng.normal();
      const double im = probe_rng.normal();
      mag = std::abs(std::sqrt(p_t_mw) * inner(beam, h) + Complex(scale * re, scale * im));
    }
    if (mag > best_mag) {
      best_mag = mag;
      d.beam = beam;
      d.theta_est = theta;
      d.r_est = r;
    }
  }
  return d;
}

}  // namespace nfba
