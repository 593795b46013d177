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

#include "nfba/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nfba/array_config.hpp"
#include "nfba/flops.hpp"

namespace nfba {

Nmse nmse(std::span<const TrialRecord> records) {
  double num_r = 0.0, den_r = 0.0, num_a = 0.0, den_a = 0.0;
  bool have_r = false, have_a = false;
  for (const TrialRecord& t : records) {
    if (t.r_est) {
      have_r = true;
      num_r += (t.r0 - *t.r_est) * (t.r0 - *t.r_est);
      den_r += t.r0 * t.r0;
    }
    if (t.theta_est) {
      have_a = true;
      num_a += (t.theta0 - *t.theta_est) * (t.theta0 - *t.theta_est);
      den_a += t.theta0 * t.theta0;
    }
  }
  Nmse out;
  if (have_r && den_r > 0.0) out.range = num_r / den_r;
  if (have_a && den_a > 0.0) out.angle = num_a / den_a;
  return out;
}

double success_rate(std::span<const TrialRecord> records) {
  if (records.empty()) return 0.0;
  const auto hits = std::count_if(records.begin(), records.end(),
                                  [](const TrialRecord& t) { return t.success; });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double mean_gain(std::span<const TrialRecord> records) {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const TrialRecord& t : records) sum += t.gain;
  return sum / static_cast<double>(records.size());
}

double achievable_rate(const TrialRecord& r, int n_rf, double t_symbol_s, double t_total_s) {
  const double t_ba = flops::pilots_with_rf_chains(r.pilot_symbols, n_rf) * t_symbol_s;
  const double frac = std::max(0.0, 1.0 - t_ba / t_total_s);
  const double snr = dbm_to_mw(r.p_t_dbm) * r.gain * r.h_norm / r.sigma2_mw;
  return frac * std::log2(1.0 + snr);
}

double mean_rate(std::span<const TrialRecord> records, int n_rf, double t_symbol_s,
                 double t_total_s) {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const TrialRecord& t : records) sum += achievable_rate(t, n_rf, t_symbol_s, t_total_s);
  return sum / static_cast<double>(records.size());
}

}  // namespace nfba
