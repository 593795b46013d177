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

#include "nfba/flops.hpp"

#include <cmath>
#include <stdexcept>

namespace nfba::flops {

std::int64_t conv_element(int c_in, int kernel) { return 2LL * c_in * kernel - 1; }

std::int64_t dense(int n_in, int n_out) { return (2LL * n_in - 1) * n_out; }

std::int64_t coarse(int n) { return 17LL * n + 7; }

std::int64_t fine(const finenet::NetConfig& cfg) {
  std::int64_t total = 0;
  int c_in = 1;
  int len = cfg.input_len;
  for (int c : cfg.branch_channels) {
    len = finenet::strided_length(len);
    total += (conv_element(c_in, 3) + conv_element(c_in, 5)) * c * len;
    c_in = 2 * c;
  }
  // Channel pooling plus the two-channel kernel-7 convolution, then gating.
  total += (conv_element(2, 7) + c_in) * len;
  total += static_cast<std::int64_t>(c_in) * len;
  total += dense(c_in, cfg.fc_width) + dense(cfg.fc_width, cfg.fc_width);
  total += dense(cfg.fc_width, cfg.input_len);
  return total;
}

std::int64_t fine(int u) {
  finenet::NetConfig cfg;
  cfg.input_len = u;
  return fine(cfg);
}

std::int64_t fine_approx(int u) { return 12658LL * u + 65280; }

std::int64_t ls(int n) { return 8LL * n * n - 2LL * n; }

std::int64_t polar_exhaustive(int n, int q) { return 4LL * n * q - 1; }

std::int64_t aswje(int n, int k_a, double varpi_min, double varpi_max, double step) {
  if (!(step > 0.0) || varpi_max < varpi_min) {
    throw std::invalid_argument("aswje flops: invalid search grid");
  }
  const auto points = static_cast<std::int64_t>(std::floor((varpi_max - varpi_min) / step + 1e-9)) + 1;
  return 6LL * n - 1 + static_cast<std::int64_t>(k_a) * (5LL * n + 694 * points + 7);
}

std::int64_t dft_dnn(int n, int q, int k_b) {
  return 52576LL * n + 13862144LL + 2047LL * (n + q) + (4LL * k_b - 1);
}

std::int64_t dnbt(int n, int q, int chi, int k_b) {
  const std::int64_t nq = static_cast<std::int64_t>(n) * q;
  return 16 * nq * nq + 6499 * nq + (4 * (static_cast<std::int64_t>(n / chi) * q + k_b) - 1);
}

int pilots_with_rf_chains(int symbols, int n_rf) {
  if (n_rf < 1) throw std::invalid_argument("pilots: n_rf must be positive");
  return (symbols + n_rf - 1) / n_rf;
}

}  // namespace nfba::flops
