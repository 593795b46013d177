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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nfba/array_config.hpp"
#include "nfba/channel.hpp"
#include "nfba/coarse.hpp"

namespace nfba::finenet {

/// Fixed-length network input built from the coarse window.
struct TrainSample {
  std::vector<double> input;         // |y|^2 in window order, zero padded to U
  std::vector<std::uint8_t> mask;    // 1 on window slots
  std::vector<double> angles;        // grid angle per slot, 0 on padding
  int target = -1;                   // slot of the true nearest grid index
};

/// U = 2 L(delta(0, r_min), eps) + 1.
int input_length(const ArrayConfig& cfg, double epsilon);

/// Window energies in subspace order. Throws std::logic_error if the window
/// does not fit in `u` slots.
TrainSample build_input(const ComplexVector& y, const CoarseResult& coarse, int u,
                        const ArrayConfig& cfg);

/// Slot of DFT index `grid_index` in the coarse window, or -1.
int window_slot(const CoarseResult& coarse, int grid_index);

/// Probability-weighted grid angle.
double refine_angle(std::span<const double> probs, const TrainSample& sample);

/// Most probable slot; diagnostic readout.
int argmax_slot(std::span<const double> probs);

struct DatasetSpec {
  ArrayConfig array;
  int samples = 1000;
  double p_min_dbm = -10.0;
  double p_max_dbm = 14.0;
  double phi_max = kPi / 3.0;
  double epsilon = 0.1;
  double gamma_exponent = 1.5;
  std::uint64_t seed = 1;
};

struct Dataset {
  std::vector<TrainSample> samples;
  std::size_t attempts = 0;
  std::size_t discarded = 0;
  double discard_rate() const {
    return attempts == 0 ? 0.0 : static_cast<double>(discarded) / static_cast<double>(attempts);
  }
};

/// Draws (phi, r, P_t) uniformly (P_t in dBm), measures through the DFT
/// codebook, runs the coarse stage and labels the window slot of the true
/// nearest grid index. Draws whose window misses it are discarded. Attempt k
/// uses generator streams keyed by (seed, k), so output is independent of
/// how many samples were requested before it.
Dataset generate_dataset(const DatasetSpec& spec);

}  // namespace nfba::finenet
