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

#include <filesystem>
#include <string>
#include <vector>

#include "nfba/metrics.hpp"

namespace nfba {

inline constexpr const char* kCsvHeader =
    "scheme,p_t_dbm,nmse_range,nmse_angle,mean_gain,success_rate,rate_bps_hz,flops,"
    "pilot_symbols,trials,seed";

/// Header plus one line per row; absent NMSE values are empty fields.
std::string format_csv(const std::vector<MetricsRow>& rows);
void write_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);

/// Inverse of format_csv. Throws std::runtime_error on a malformed file.
std::vector<MetricsRow> parse_csv(const std::string& text);
std::vector<MetricsRow> read_csv(const std::filesystem::path& path);

/// Metrics that get one chart each.
const std::vector<std::string>& plot_metrics();

/// Standalone SVG line chart of `metric` against transmit power, one series
/// per scheme. NMSE is drawn on a log10 axis.
std::string render_svg(const std::vector<MetricsRow>& rows, const std::string& metric);

/// Writes <dir>/<metric>.svg for every plot metric; returns the paths.
std::vector<std::filesystem::path> write_plots(const std::vector<MetricsRow>& rows,
                                               const std::filesystem::path& dir);

/// Fixed-width text table for terminal output.
std::string format_table(const std::vector<MetricsRow>& rows);

}  // namespace nfba
