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

#include "nfba/finenet/dataset.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "nfba/numerics.hpp"
#include "nfba/rng.hpp"

namespace nfba::finenet {

int input_length(const ArrayConfig& cfg, double epsilon) {
  return 2 * half_width_at(0.0, cfg.r_min, epsilon, cfg) + 1;
}

TrainSample build_input(const ComplexVector& y, const CoarseResult& coarse, int u,
                        const ArrayConfig& cfg) {
  const int w = static_cast<int>(coarse.subspace.size());
  if (w > u) {
    throw std::logic_error(fmt::format("build_input: window of {} exceeds input length {}", w, u));
  }
  TrainSample s;
  s.input.assign(u, 0.0);
  s.mask.assign(u, 0);
  s.angles.assign(u, 0.0);
  for (int k = 0; k < w; ++k) {
    const int m = coarse.subspace[k];
    s.input[k] = std::norm(y[m - 1]);
    s.mask[k] = 1;
    s.angles[k] = cfg.grid_angle(m);
  }
  return s;
}

int window_slot(const CoarseResult& coarse, int grid_index) {
  const auto it = std::find(coarse.subspace.begin(), coarse.subspace.end(), grid_index);
  return it == coarse.subspace.end() ? -1 : static_cast<int>(it - coarse.subspace.begin());
}

double refine_angle(std::span<const double> probs, const TrainSample& sample) {
  if (probs.size() != sample.angles.size()) {
    throw std::invalid_argument("refine_angle: length mismatch");
  }
  double theta = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) theta += probs[k] * sample.angles[k];
  return theta;
}

int argmax_slot(std::span<const double> probs) {
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

Dataset generate_dataset(const DatasetSpec& spec) {
  spec.array.validate();
  if (spec.samples < 0) throw std::invalid_argument("generate_dataset: negative sample count");
  const ArrayConfig& cfg = spec.array;
  const DftCodebook dft(cfg);
  const int u = input_length(cfg, spec.epsilon);
  const double sigma2 = cfg.noise_mw();
  const std::size_t max_attempts = 50 * static_cast<std::size_t>(std::max(spec.samples, 1));

  Dataset out;
  out.samples.reserve(spec.samples);
  while (static_cast<int>(out.samples.size()) < spec.samples && out.attempts < max_attempts) {
    const std::uint64_t k = out.attempts++;
    KeyedRng draw(spec.seed, k, StreamTag::kDataset);
    const double phi = draw.uniform(-spec.phi_max, spec.phi_max);
    const double r = draw.uniform(cfg.r_min, cfg.r_max);
    const double p_dbm = draw.uniform(spec.p_min_dbm, spec.p_max_dbm);
    const UePosition ue = UePosition::from_phi(phi, r);
    const double p_mw = dbm_to_mw(p_dbm);

    KeyedRng noise(spec.seed, k, StreamTag::kDftNoise);
    const ComplexVector y = measure(channel(ue, cfg), p_mw, sigma2, dft, noise);
    const CoarseResult coarse =
        coarse_align(y, p_mw, cfg, spec.epsilon, default_gamma(p_mw, spec.gamma_exponent));
    const int slot = window_slot(coarse, nearest_grid_index(ue.theta, cfg));
    if (slot < 0) {
      ++out.discarded;
      continue;
    }
    TrainSample s = build_input(y, coarse, u, cfg);
    s.target = slot;
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace nfba::finenet
