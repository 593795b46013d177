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
#include <string>
#include <vector>

#include "nfba/finenet/network.hpp"

namespace nfba::flops {

/// Multiply-accumulate cost of one 1D convolution output element: 2 C_in K - 1.
std::int64_t conv_element(int c_in, int kernel);
/// Cost of a dense layer: (2 n_in - 1) n_out.
std::int64_t dense(int n_in, int n_out);

std::int64_t coarse(int n);

/// Exact fine-stage count: three two-branch convolution blocks, spatial
/// attention (pooling, kernel-7 convolution, gating), two FC blocks and the
/// output layer.
std::int64_t fine(const finenet::NetConfig& cfg);
std::int64_t fine(int u);
/// Collapsed approximation 12658 U + 65280.
std::int64_t fine_approx(int u);

std::int64_t ls(int n);
std::int64_t polar_exhaustive(int n, int q);
std::int64_t aswje(int n, int k_a, double varpi_min, double varpi_max, double step);
std::int64_t dft_dnn(int n, int q, int k_b);
std::int64_t dnbt(int n, int q, int chi, int k_b);

/// Pilot symbols per scheme for a single RF chain.
namespace pilots {
inline int proposed(int n) { return n; }
inline int ls(int n) { return n; }
inline int polar_exhaustive(int n, int q) { return n * q; }
inline int aswje(int n, int k_a) { return n + k_a; }
inline int dft_dnn(int n, int k_b) { return n / 4 + k_b; }
inline int dnbt(int n, int q, int chi, int k_b) { return (n / chi) * q + k_b; }
}  // namespace pilots

/// ceil(symbols / n_rf).
int pilots_with_rf_chains(int symbols, int n_rf);

}  // namespace nfba::flops
