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

namespace nfba {

/// Stream tags for the keyed generator; one independent stream per use.
enum class StreamTag : std::uint64_t {
  kUser = 1,
  kDftNoise = 2,
  kPolarNoise = 3,
  kProbeNoise = 4,
  kDataset = 5,
  kShuffle = 6,
  kInit = 7,
  kDropout = 8,
  kGeneric = 9,
};

/// Counter-based generator keyed by (master seed, trial index, stream tag).
///
/// The key is hashed into a 64-bit base and every draw is SplitMix64 of
/// base + counter * golden-gamma, so any (seed, trial, tag) stream can be
/// reproduced independently of evaluation order or thread assignment.
class KeyedRng {
 public:
  KeyedRng(std::uint64_t seed, std::uint64_t trial, StreamTag tag);
  explicit KeyedRng(std::uint64_t seed) : KeyedRng(seed, 0, StreamTag::kGeneric) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by the Box-Muller transform (cosine branch, sine cached).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace nfba
