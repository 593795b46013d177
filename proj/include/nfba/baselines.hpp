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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nfba/array_config.hpp"
#include "nfba/channel.hpp"
#include "nfba/rng.hpp"

namespace nfba {

/// Unit-norm combining beam chosen by a scheme plus whatever it estimated.
struct BeamDecision {
  ComplexVector beam;
  std::optional<double> theta_est;
  std::optional<double> r_est;
  std::string scheme;
  int pilot_symbols = 0;
};

/// Matched filter on h_hat = F y / sqrt(P_t). A zero estimate falls back to
/// the broadside DFT beam.
BeamDecision ls_baseline(const ComplexVector& y, double p_t_mw, const DftCodebook& dft,
                         const ArrayConfig& cfg);

/// Noisy sweep of every polar codeword, one noise draw per codeword, keeping
/// the strongest; ties go to the lower codeword index. No angle or range
/// estimate is reported.
BeamDecision polar_exhaustive(const ComplexVector& h, double p_t_mw, double sigma2_mw,
                              const PolarCodebook& codebook, KeyedRng& rng);
/// Same with precomputed noiseless correlations a_k^H h.
BeamDecision polar_exhaustive(std::span<const Complex> correlations, double p_t_mw,
                              double sigma2_mw, const PolarCodebook& codebook, KeyedRng& rng);

/// Best normalized gain over the polar codebook, noiseless.
double genie_polar_best(const ComplexVector& h, const PolarCodebook& codebook);
double genie_polar_best(std::span<const Complex> correlations, double h_norm);

struct AswjeConfig {
  double kappa2 = 0.5;
  int k_a = 3;
  double step = 0.1;
  /// Largest |theta| for which the varpi table is built.
  double theta_limit = 0.95;
};

/// Support-width joint angle/range estimator.
///
/// The angle is the grid angle at the lower median of the support set
/// {i : |y_i| > kappa2 max |y|}. The range comes from matching the measured
/// ratios |y_i| / |y_center| over the support span, widened by one column on
/// each side, against the noiseless
/// correlation-ratio curve on a varpi = sqrt(r / (d (1 - theta^2))) grid, so
/// r = varpi^2 d (1 - theta^2). With k_a > 1 the centers med-1, med, med+1
/// (first k_a of them, nearest first) each get a range estimate and one
/// probe measurement with the matching near-field beam; the strongest probe
/// wins.
class AswjeEstimator {
 public:
  AswjeEstimator(const ArrayConfig& cfg, const AswjeConfig& acfg = {});

  BeamDecision estimate(const ComplexVector& y, const ComplexVector& h, double p_t_mw,
                        double sigma2_mw, KeyedRng& probe_rng) const;

  /// Range estimate for a given support and center. Exposed for testing.
  double demap_range(const ComplexVector& y, std::span<const int> support, int center) const;

  /// Support indices in ascending order; the global argmax alone when empty.
  std::vector<int> support(const ComplexVector& y) const;

  /// varpi bounds at broadside, used for complexity reporting.
  double varpi_min() const;
  double varpi_max() const;
  const AswjeConfig& config() const { return acfg_; }

 private:
  double ratio(int k, int l) const { return table_[static_cast<std::size_t>(k) * (half_ + 1) + l]; }

  ArrayConfig cfg_;
  AswjeConfig acfg_;
  int half_;
  int k_lo_, k_hi_;  // varpi = k * step
  std::vector<double> table_;
};

}  // namespace nfba
