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

#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "nfba/array_config.hpp"
#include "nfba/rng.hpp"

namespace nfba {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kFarField = std::numeric_limits<double>::infinity();

/// User position; theta = sin(phi) is the spatial angle.
struct UePosition {
  double phi = 0.0;    // rad
  double theta = 0.0;  // sin(phi)
  double r = 0.0;      // m

  static UePosition from_phi(double phi, double r) { return {phi, std::sin(phi), r}; }
  static UePosition from_theta(double theta, double r) { return {std::asin(theta), theta, r}; }
};

/// Near-field steering vector with entries exp(+j 2pi/lambda (r^(n) - r)) / sqrt(N).
/// r = kFarField yields the planar-wave (DFT) vector. Throws std::domain_error for
/// r <= 0 or |theta| > 1.
ComplexVector steering_vector(double theta, double r, const ArrayConfig& cfg);

/// LoS channel sqrt(N) h0 exp(-j 2pi r0 / lambda) a(theta0, r0), h0 = lambda / (4 pi r0).
ComplexVector channel(const UePosition& ue, const ArrayConfig& cfg);

/// Spatial angle of DFT column m in 1..N.
double grid_angle(int m, const ArrayConfig& cfg);

/// Column m of the N-point DFT codebook. Throws std::out_of_range.
ComplexVector dft_column(int m, const ArrayConfig& cfg);

/// argmin_m |theta - theta_m|, ties to the smaller index.
int nearest_grid_index(double theta, const ArrayConfig& cfg);

/// Complex inner product a^H b.
Complex inner(const ComplexVector& a, const ComplexVector& b);

/// |w^H h| / ||h||.
double beam_gain(const ComplexVector& w, const ComplexVector& h);

/// Immutable N x N DFT combining matrix F = [f(theta_1) ... f(theta_N)].
class DftCodebook {
 public:
  explicit DftCodebook(const ArrayConfig& cfg);

  const ComplexMatrix& matrix() const { return f_; }
  int size() const { return static_cast<int>(f_.cols()); }
  ComplexVector column(int m) const { return f_.col(m - 1); }

  /// Noiseless combined samples F^H x.
  ComplexVector analyze(const ComplexVector& x) const;
  /// F y (inverse of analyze).
  ComplexVector synthesize(const ComplexVector& y) const;

 private:
  ComplexMatrix f_;
};

/// Circularly-symmetric Gaussian noise, real and imaginary parts each N(0, sigma2 / 2).
ComplexVector complex_noise(int n, double sigma2_mw, KeyedRng& rng);

/// y = sqrt(P_t) F^H h + z with z ~ CN(0, sigma2 I).
ComplexVector measure(const ComplexVector& h, double p_t_mw, double sigma2_mw,
                      const DftCodebook& dft, KeyedRng& rng);

/// Range of ring q for angle theta. Ring 0 must map to kFarField.
using RingRule = std::function<double(double theta, int q, const ArrayConfig& cfg)>;

/// Ring radii N^2 d^2 (1 - theta^2) / (2 lambda beta^2 q) for q >= 1, far field at q = 0.
RingRule distance_ring_rule(double beta);

struct PolarCodeword {
  int angle_index = 0;  // 1..N
  int ring_index = 0;   // 0..Q-1
  double theta = 0.0;
  double range = kFarField;
};

/// N angles x Q rings of near-field steering vectors, angle-major column order.
class PolarCodebook {
 public:
  PolarCodebook(const ArrayConfig& cfg, double beta, int q_levels);
  PolarCodebook(const ArrayConfig& cfg, int q_levels, const RingRule& rule);

  int size() const { return static_cast<int>(words_.size()); }
  int rings() const { return q_levels_; }
  const PolarCodeword& codeword(int k) const { return words_[k]; }
  const ComplexMatrix& matrix() const { return a_; }
  ComplexVector column(int k) const { return a_.col(k); }
  int index_of(int angle_index, int ring_index) const {
    return (angle_index - 1) * q_levels_ + ring_index;
  }

  /// Noiseless correlations a_k^H h for every codeword, in codeword order.
  std::vector<Complex> correlate(const ComplexVector& h) const;

 private:
  int q_levels_;
  std::vector<PolarCodeword> words_;
  ComplexMatrix a_;
};

}  // namespace nfba
