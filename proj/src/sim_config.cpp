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

#include "nfba/sim_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nfba/errors.hpp"

namespace nfba {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  }
  return out;
}

using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"n_antennas", [](SimConfig& c, auto& k, auto& v) { c.array.n_antennas = to_int<int>(k, v); }},
      {"carrier_ghz", [](SimConfig& c, auto& k, auto& v) { c.array.carrier_hz = to_double(k, v) * 1e9; }},
      {"bandwidth_mhz", [](SimConfig& c, auto& k, auto& v) { c.array.bandwidth_hz = to_double(k, v) * 1e6; }},
      {"noise_psd_dbm_hz", [](SimConfig& c, auto& k, auto& v) { c.array.noise_psd_dbm_per_hz = to_double(k, v); }},
      {"r_min_m", [](SimConfig& c, auto& k, auto& v) { c.array.r_min = to_double(k, v); }},
      {"r_max_m", [](SimConfig& c, auto& k, auto& v) { c.array.r_max = to_double(k, v); }},
      {"p_t_dbm", [](SimConfig& c, auto&, auto& v) { c.sweep_dbm = parse_sweep(v); }},
      {"trials", [](SimConfig& c, auto& k, auto& v) { c.trials = to_int<int>(k, v); }},
      {"seed", [](SimConfig& c, auto& k, auto& v) { c.seed = to_int<std::uint64_t>(k, v); }},
      {"epsilon", [](SimConfig& c, auto& k, auto& v) { c.epsilon = to_double(k, v); }},
      {"gamma_exponent", [](SimConfig& c, auto& k, auto& v) { c.gamma_exponent = to_double(k, v); }},
      {"n_rf", [](SimConfig& c, auto& k, auto& v) { c.n_rf = to_int<int>(k, v); }},
      {"t_symbol_us", [](SimConfig& c, auto& k, auto& v) { c.t_symbol_s = to_double(k, v) * 1e-6; }},
      {"t_total_ms", [](SimConfig& c, auto& k, auto& v) { c.t_total_s = to_double(k, v) * 1e-3; }},
      {"schemes", [](SimConfig& c, auto&, auto& v) { c.schemes = split(v, ','); }},
      {"phi_max_deg", [](SimConfig& c, auto& k, auto& v) { c.phi_max_rad = to_double(k, v) * kPi / 180.0; }},
      {"ue_r_min_m", [](SimConfig& c, auto& k, auto& v) { c.ue_r_min = to_double(k, v); }},
      {"ue_r_max_m", [](SimConfig& c, auto& k, auto& v) { c.ue_r_max = to_double(k, v); }},
      {"polar_beta", [](SimConfig& c, auto& k, auto& v) { c.polar_beta = to_double(k, v); }},
      {"polar_rings", [](SimConfig& c, auto& k, auto& v) { c.polar_rings = to_int<int>(k, v); }},
      {"aswje_kappa2", [](SimConfig& c, auto& k, auto& v) { c.aswje_kappa2 = to_double(k, v); }},
      {"aswje_k_a", [](SimConfig& c, auto& k, auto& v) { c.aswje_k_a = to_int<int>(k, v); }},
      {"train_samples", [](SimConfig& c, auto& k, auto& v) { c.training.samples = to_int<int>(k, v); }},
      {"train_lr", [](SimConfig& c, auto& k, auto& v) { c.training.lr = to_double(k, v); }},
      {"train_epochs", [](SimConfig& c, auto& k, auto& v) { c.training.max_epochs = to_int<int>(k, v); }},
      {"train_patience", [](SimConfig& c, auto& k, auto& v) { c.training.patience = to_int<int>(k, v); }},
      {"train_batch", [](SimConfig& c, auto& k, auto& v) { c.training.batch_size = to_int<int>(k, v); }},
      {"train_seed", [](SimConfig& c, auto& k, auto& v) { c.training.seed = to_int<std::uint64_t>(k, v); }},
      {"weights_path", [](SimConfig& c, auto&, auto& v) { c.weights_path = v; }},
      {"csv_path", [](SimConfig& c, auto&, auto& v) { c.csv_path = v; }},
      {"plot_dir", [](SimConfig& c, auto&, auto& v) { c.plot_dir = v; }},
  };
  return table;
}

}  // namespace

SimConfig::SimConfig()
    : sweep_dbm(parse_sweep("-10:14:2")),
      schemes({"proposed", "proposed-coarse", "ls", "polar-exh", "aswje"}) {}

const std::vector<std::string>& known_schemes() {
  static const std::vector<std::string> names = {"proposed", "proposed-coarse", "ls", "polar-exh",
                                                 "aswje"};
  return names;
}

std::vector<double> parse_sweep(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError("p_t_dbm: expected start:stop:step");
    const double start = to_double("p_t_dbm", parts[0]);
    const double stop = to_double("p_t_dbm", parts[1]);
    const double step = to_double("p_t_dbm", parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("p_t_dbm: empty or unbounded range");
    std::vector<double> out;
    const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int k = 0; k <= count; ++k) out.push_back(start + k * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& v : split(t, ',')) out.push_back(to_double("p_t_dbm", v));
  return out;
}

void SimConfig::validate() const {
  try {
    array.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (n_rf < 1) throw ConfigError("n_rf must be at least 1");
  if (!(t_symbol_s > 0.0) || !(t_total_s > 0.0)) throw ConfigError("timing must be positive");
  if (!(phi_max_rad > 0.0 && phi_max_rad < kPi / 2.0)) {
    throw ConfigError("phi_max_deg must lie in (0, 90)");
  }
  if (!(ue_r_min >= array.r_min && ue_r_max <= array.r_max && ue_r_min < ue_r_max)) {
    throw ConfigError("UE range interval must lie inside [r_min_m, r_max_m]");
  }
  if (!(polar_beta > 0.0) || polar_rings < 1) throw ConfigError("invalid polar codebook settings");
  if (!(aswje_kappa2 > 0.0 && aswje_kappa2 < 1.0)) throw ConfigError("aswje_kappa2 must lie in (0, 1)");
  if (aswje_k_a < 1 || aswje_k_a > 3) throw ConfigError("aswje_k_a must be 1..3");
  for (const auto& s : schemes) {
    const auto& k = known_schemes();
    if (std::find(k.begin(), k.end(), s) == k.end()) {
      throw ConfigError(fmt::format("unknown scheme '{}'", s));
    }
  }
  if (training.samples < 1 || training.max_epochs < 1 || training.patience < 1 ||
      training.batch_size < 2 || !(training.lr >= 0.0)) {
    throw ConfigError("invalid training settings");
  }
}

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key = value", lineno));
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(fmt::format("line {}: unknown key '{}'", lineno, key));
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_string(const SimConfig& c) {
  std::string out;
  auto line = [&](std::string_view k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
  auto num = [](double v) { return fmt::format("{}", v); };
  line("n_antennas", std::to_string(c.array.n_antennas));
  line("carrier_ghz", num(c.array.carrier_hz / 1e9));
  line("bandwidth_mhz", num(c.array.bandwidth_hz / 1e6));
  line("noise_psd_dbm_hz", num(c.array.noise_psd_dbm_per_hz));
  line("r_min_m", num(c.array.r_min));
  line("r_max_m", num(c.array.r_max));
  line("p_t_dbm", fmt::format("{}", fmt::join(c.sweep_dbm, ",")));
  line("trials", std::to_string(c.trials));
  line("seed", std::to_string(c.seed));
  line("epsilon", num(c.epsilon));
  line("gamma_exponent", num(c.gamma_exponent));
  line("n_rf", std::to_string(c.n_rf));
  line("t_symbol_us", num(c.t_symbol_s * 1e6));
  line("t_total_ms", num(c.t_total_s * 1e3));
  line("schemes", fmt::format("{}", fmt::join(c.schemes, ",")));
  line("phi_max_deg", num(c.phi_max_rad * 180.0 / kPi));
  line("ue_r_min_m", num(c.ue_r_min));
  line("ue_r_max_m", num(c.ue_r_max));
  line("polar_beta", num(c.polar_beta));
  line("polar_rings", std::to_string(c.polar_rings));
  line("aswje_kappa2", num(c.aswje_kappa2));
  line("aswje_k_a", std::to_string(c.aswje_k_a));
  line("train_samples", std::to_string(c.training.samples));
  line("train_lr", num(c.training.lr));
  line("train_epochs", std::to_string(c.training.max_epochs));
  line("train_patience", std::to_string(c.training.patience));
  line("train_batch", std::to_string(c.training.batch_size));
  line("train_seed", std::to_string(c.training.seed));
  if (!c.weights_path.empty()) line("weights_path", c.weights_path);
  if (!c.csv_path.empty()) line("csv_path", c.csv_path);
  if (!c.plot_dir.empty()) line("plot_dir", c.plot_dir);
  return out;
}

}  // namespace nfba
