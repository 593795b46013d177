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

#include <cstdint>
#include <span>
#include <vector>

#include "nfba/array_config.hpp"
#include "nfba/channel.hpp"

namespace nfba {

/// Floor applied to the ML gain estimate so the range inversion stays total.
inline constexpr double kGainFloor = 1e-30;

/// Output of the model-based stage.
struct CoarseResult {
  int center_index = 0;    // i_hat, 1..N
  int half_width = 0;      // g(i_hat)
  double range_est = 0.0;  // r_hat, m, clamped to [r_min, r_max]
  double angle_est = 0.0;  // theta_{i_hat}
  double gain_est = 0.0;   // E_h_hat
  double objective = 0.0;  // penalized window energy at i_hat
  std::vector<int> subspace;  // 2 g(i_hat) + 1 circular DFT indices centred on i_hat
};

struct P2Solution {
  int index = 0;  // 1..N
  double objective = 0.0;
};

/// gamma = P_t / 10^exponent, in linear milliwatts.
double default_gamma(double p_t_mw, double exponent = 1.5);

/// ML estimate of ||h||^2 from the total received energy.
double estimate_channel_gain(const ComplexVector& y, double p_t_mw, double sigma2_mw);

/// r_hat = clamp(lambda / (4 pi) sqrt(N / E_h), r_min, r_max).
double estimate_range(double gain_est, const ArrayConfig& cfg);

/// Sliding-window half width g(i) at estimated range r_hat.
int window_half_width(int i, double r_hat, double epsilon, const ArrayConfig& cfg);

/// Maximizes window energy minus gamma times the left/right energy imbalance
/// over all circular windows [i - g(i), i + g(i)]. Ties go to the smaller index.
P2Solution solve_p2(std::span<const double> energies, std::span<const int> half_widths,
                    double gamma);
P2Solution solve_p2(const ComplexVector& y, double r_hat, double epsilon, double gamma,
                    const ArrayConfig& cfg);

/// Gain, range, windowed detection and subspace extraction in one pass.
/// sigma^2 is taken from the configuration.
CoarseResult coarse_align(const ComplexVector& y, double p_t_mw, const ArrayConfig& cfg,
                          double epsilon, double gamma);

/// Same computation on an operation-counting scalar; `flops` receives the
/// number of add/mul/div/sqrt/min/max/abs/compare operations on measured data.
CoarseResult coarse_align_counted(const ComplexVector& y, double p_t_mw, const ArrayConfig& cfg,
                                  double epsilon, double gamma, std::uint64_t& flops);

}  // namespace nfba
