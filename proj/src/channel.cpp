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

#include "nfba/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace nfba {
namespace {

// conj(a) . b over n entries, accumulated in index order.
Complex inner_raw(const Complex* a, const Complex* b, Eigen::Index n) {
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ar = a[i].real();
    const double ai = a[i].imag();
    const double br = b[i].real();
    const double bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

}  // namespace

ComplexVector steering_vector(double theta, double r, const ArrayConfig& cfg) {
  if (!(r > 0.0)) throw std::domain_error("steering_vector: range must be positive");
  if (!(std::abs(theta) <= 1.0)) throw std::domain_error("steering_vector: |theta| must be <= 1");
  const int n = cfg.n_antennas;
  const double k = 2.0 * kPi / cfg.wavelength();
  const double d = cfg.spacing();
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexVector a(n);
  for (int i = 1; i <= n; ++i) {
    const double delta = cfg.element_offset(i);
    double phase;
    if (std::isinf(r)) {
      phase = -kPi * delta * theta;
    } else {
      const double offset = delta * d;
      const double num = offset * offset - 2.0 * r * offset * theta;
      phase = k * (num / (std::sqrt(r * r + num) + r));
    }
    a[i - 1] = Complex(norm * std::cos(phase), norm * std::sin(phase));
  }
  return a;
}

ComplexVector channel(const UePosition& ue, const ArrayConfig& cfg) {
  const double lambda = cfg.wavelength();
  const double h0 = lambda / (4.0 * kPi * ue.r);
  const double phase = -2.0 * kPi * ue.r / lambda;
  const Complex gain = std::sqrt(static_cast<double>(cfg.n_antennas)) * h0 *
                       Complex(std::cos(phase), std::sin(phase));
  return gain * steering_vector(ue.theta, ue.r, cfg);
}

double grid_angle(int m, const ArrayConfig& cfg) {
  if (m < 1 || m > cfg.n_antennas) {
    throw std::out_of_range(fmt::format("grid index {} outside 1..{}", m, cfg.n_antennas));
  }
  return cfg.grid_angle(m);
}

ComplexVector dft_column(int m, const ArrayConfig& cfg) {
  return steering_vector(grid_angle(m, cfg), kFarField, cfg);
}

int nearest_grid_index(double theta, const ArrayConfig& cfg) {
  const int n = cfg.n_antennas;
  const double pos = 0.5 * (n * theta + n + 1.0);
  int lo = static_cast<int>(std::floor(pos));
  lo = std::clamp(lo, 1, n);
  int best = lo;
  double best_gap = std::abs(theta - cfg.grid_angle(lo));
  for (int m = lo - 1; m <= lo + 1; ++m) {
    if (m < 1 || m > n || m == lo) continue;
    const double gap = std::abs(theta - cfg.grid_angle(m));
    if (gap < best_gap || (gap == best_gap && m < best)) {
      best = m;
      best_gap = gap;
    }
  }
  return best;
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
  return inner_raw(a.data(), b.data(), a.size());
}

double beam_gain(const ComplexVector& w, const ComplexVector& h) {
  return std::abs(inner(w, h)) / h.norm();
}

DftCodebook::DftCodebook(const ArrayConfig& cfg) : f_(cfg.n_antennas, cfg.n_antennas) {
  for (int m = 1; m <= cfg.n_antennas; ++m) f_.col(m - 1) = dft_column(m, cfg);
}

ComplexVector DftCodebook::analyze(const ComplexVector& x) const {
  ComplexVector out(f_.cols());
  for (Eigen::Index m = 0; m < f_.cols(); ++m) {
    out[m] = inner_raw(f_.col(m).data(), x.data(), f_.rows());
  }
  return out;
}

ComplexVector DftCodebook::synthesize(const ComplexVector& y) const {
  ComplexVector out = ComplexVector::Zero(f_.rows());
  for (Eigen::Index m = 0; m < f_.cols(); ++m) {
    const Complex ym = y[m];
    const Complex* col = f_.col(m).data();
    for (Eigen::Index n = 0; n < f_.rows(); ++n) {
      const double re = col[n].real() * ym.real() - col[n].imag() * ym.imag();
      const double im = col[n].real() * ym.imag() + col[n].imag() * ym.real();
      out[n] += Complex(re, im);
    }
  }
  return out;
}

ComplexVector complex_noise(int n, double sigma2_mw, KeyedRng& rng) {
  const double scale = std::sqrt(sigma2_mw / 2.0);
  ComplexVector z(n);
  for (int i = 0; i < n; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    z[i] = Complex(scale * re, scale * im);
  }
  return z;
}

ComplexVector measure(const ComplexVector& h, double p_t_mw, double sigma2_mw,
                      const DftCodebook& dft, KeyedRng& rng) {
  if (!(p_t_mw > 0.0) || !(sigma2_mw >= 0.0)) {
    throw std::domain_error("measure: powers must be positive");
  }
  ComplexVector y = std::sqrt(p_t_mw) * dft.analyze(h);
  if (sigma2_mw > 0.0) y += complex_noise(static_cast<int>(y.size()), sigma2_mw, rng);
  return y;
}

RingRule distance_ring_rule(double beta) {
  if (!(beta > 0.0)) throw std::domain_error("distance_ring_rule: beta must be positive");
  return [beta](double theta, int q, const ArrayConfig& cfg) {
    if (q == 0) return kFarField;
    const double nd = cfg.n_antennas * cfg.spacing();
    return nd * nd * (1.0 - theta * theta) / (2.0 * cfg.wavelength() * beta * beta * q);
  };
}

PolarCodebook::PolarCodebook(const ArrayConfig& cfg, double beta, int q_levels)
    : PolarCodebook(cfg, q_levels, distance_ring_rule(beta)) {}

PolarCodebook::PolarCodebook(const ArrayConfig& cfg, int q_levels, const RingRule& rule)
    : q_levels_(q_levels) {
  if (q_levels < 1) throw std::domain_error("PolarCodebook: need at least one ring");
  const int n = cfg.n_antennas;
  words_.reserve(static_cast<std::size_t>(n) * q_levels);
  a_.resize(n, static_cast<Eigen::Index>(n) * q_levels);
  for (int m = 1; m <= n; ++m) {
    const double theta = cfg.grid_angle(m);
    for (int q = 0; q < q_levels; ++q) {
      const double range = rule(theta, q, cfg);
      const int k = static_cast<int>(words_.size());
      words_.push_back({m, q, theta, range});
      a_.col(k) = q == 0 ? dft_column(m, cfg) : steering_vector(theta, range, cfg);
    }
  }
}

std::vector<Complex> PolarCodebook::correlate(const ComplexVector& h) const {
  std::vector<Complex> out(words_.size());
  for (std::size_t k = 0; k < words_.size(); ++k) {
    out[k] = inner_raw(a_.col(static_cast<Eigen::Index>(k)).data(), h.data(), a_.rows());
  }
  return out;
}

}  // namespace nfba
