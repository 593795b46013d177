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
#include <filesystem>
#include <string>
#include <vector>

#include "nfba/array_config.hpp"

namespace nfba {

struct TrainingConfig {
  int samples = 20000;
  double lr = 1e-3;
  int max_epochs = 100;
  int patience = 10;
  int batch_size = 64;
  std::uint64_t seed = 7;
};

/// Simulation settings read from a flat `key = value` file.
///
/// Units are part of the key names. Lists are comma separated; the power
/// sweep also accepts `start:stop:step`. Lines starting with '#' are ignored.
struct SimConfig {
  ArrayConfig array;
  std::vector<double> sweep_dbm;
  int trials = 2000;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  double gamma_exponent = 1.5;
  int n_rf = 1;
  double t_symbol_s = 1.04e-6;
  double t_total_s = 1e-2;
  std::vector<std::string> schemes;
  double phi_max_rad = kPi / 3.0;
  double ue_r_min = 4.0;
  double ue_r_max = 80.0;
  double polar_beta = 1.2;
  int polar_rings = 16;
  double aswje_kappa2 = 0.5;
  int aswje_k_a = 3;
  TrainingConfig training;
  std::string weights_path;
  std::string csv_path;
  std::string plot_dir;

  SimConfig();

  /// Throws ConfigError.
  void validate() const;
};

/// Names accepted in `schemes`.
const std::vector<std::string>& known_schemes();

/// Parses `start:stop:step` or a comma-separated list of dBm values.
std::vector<double> parse_sweep(const std::string& text);

/// Throws ConfigError on unknown keys or malformed values.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(to_string(c)) reproduces c.
std::string to_string(const SimConfig& cfg);

}  // namespace nfba
