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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nfba {

/// Propagation speed used for all wavelength arithmetic. The 3e8 m/s value
/// (rather than 299792458) reproduces the published Rayleigh distance.
inline constexpr double kSpeedOfLight = 3.0e8;
inline constexpr double kPi = std::numbers::pi;

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

/// Uniform linear array geometry and radio constants.
///
/// Antenna n (1-based) sits at delta_n * d on the array axis with
/// delta_n = (2n - N - 1) / 2 and half-wavelength spacing d.
struct ArrayConfig {
  int n_antennas = 256;
  double carrier_hz = 28.0e9;
  double bandwidth_hz = 850.0e6;
  double noise_psd_dbm_per_hz = -174.0;
  double r_min = 4.0;   // m
  double r_max = 80.0;  // m

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  double spacing() const { return 0.5 * wavelength(); }
  double aperture() const { return (n_antennas - 1) * spacing(); }
  double rayleigh_distance() const {
    const double D = aperture();
    return 2.0 * D * D / wavelength();
  }
  double fresnel_distance() const {
    const double D = aperture();
    return 0.62 * std::sqrt(D * D * D / wavelength());
  }
  double noise_dbm() const {
    return noise_psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
  }
  double noise_mw() const { return dbm_to_mw(noise_dbm()); }

  /// delta_n for a 1-based antenna index.
  double element_offset(int n) const {
    return 0.5 * (2.0 * n - n_antennas - 1.0);
  }

  /// Spatial angle of DFT column m (1-based): (2m - N - 1) / N.
  double grid_angle(int m) const {
    return (2.0 * m - n_antennas - 1.0) / n_antennas;
  }

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

}  // namespace nfba
