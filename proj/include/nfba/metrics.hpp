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
#include <optional>
#include <span>
#include <string>

namespace nfba {

/// Outcome of one scheme on one channel draw at one power.
struct TrialRecord {
  std::string scheme;
  double p_t_dbm = 0.0;
  double theta0 = 0.0;
  double r0 = 0.0;
  std::optional<double> theta_est;
  std::optional<double> r_est;
  double gain = 0.0;   // |w^H h| / ||h||, recomputed by the harness
  double genie = 0.0;  // best polar-codeword gain for this channel
  bool success = false;
  int pilot_symbols = 0;
  double h_norm = 0.0;
  double sigma2_mw = 0.0;
};

/// E|x0 - x_hat|^2 / E|x0|^2 over records carrying an estimate; absent when
/// none do.
struct Nmse {
  std::optional<double> range;
  std::optional<double> angle;
};

Nmse nmse(std::span<const TrialRecord> records);
double success_rate(std::span<const TrialRecord> records);
double mean_gain(std::span<const TrialRecord> records);

/// (1 - T_ba / T_total) log2(1 + P_t |w^H h| / sigma^2) with
/// T_ba = ceil(pilots / n_rf) T_symbol; zero once T_ba reaches T_total.
double achievable_rate(const TrialRecord& r, int n_rf, double t_symbol_s, double t_total_s);
double mean_rate(std::span<const TrialRecord> records, int n_rf, double t_symbol_s,
                 double t_total_s);

/// Aggregated metrics for one (scheme, power) point.
struct MetricsRow {
  std::string scheme;
  double p_t_dbm = 0.0;
  std::optional<double> nmse_range;
  std::optional<double> nmse_angle;
  double mean_gain = 0.0;
  double success_rate = 0.0;
  double rate_bps_hz = 0.0;
  std::int64_t flops = 0;
  int pilot_symbols = 0;
  int trials = 0;
  std::uint64_t seed = 0;
};

}  // namespace nfba
