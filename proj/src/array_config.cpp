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

#include "nfba/array_config.hpp"

#include <fmt/format.h>

namespace nfba {

void ArrayConfig::validate() const {
  if (n_antennas < 2) {
    throw std::invalid_argument(fmt::format("n_antennas must be >= 2, got {}", n_antennas));
  }
  if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("carrier and bandwidth must be positive");
  }
  if (!std::isfinite(noise_psd_dbm_per_hz)) {
    throw std::invalid_argument("noise PSD must be finite");
  }
  if (!(r_min > 0.0) || !(r_min < r_max)) {
    throw std::invalid_argument(
        fmt::format("need 0 < r_min < r_max, got [{}, {}]", r_min, r_max));
  }
}

}  // namespace nfba
