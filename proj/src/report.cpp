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

#include "nfba/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace nfba {
namespace {

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::runtime_error("csv: bad number '" + s + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::runtime_error("csv: bad integer '" + s + "'");
  }
  return v;
}

std::optional<double> metric_value(const MetricsRow& r, const std::string& metric) {
  if (metric == "nmse_range") return r.nmse_range;
  if (metric == "nmse_angle") return r.nmse_angle;
  if (metric == "mean_gain") return r.mean_gain;
  if (metric == "success_rate") return r.success_rate;
  if (metric == "rate_bps_hz") return r.rate_bps_hz;
  throw std::invalid_argument("unknown metric " + metric);
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string format_csv(const std::vector<MetricsRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.scheme, num(r.p_t_dbm),
                       opt(r.nmse_range), opt(r.nmse_angle), num(r.mean_gain),
                       num(r.success_rate), num(r.rate_bps_hz), r.flops, r.pilot_symbols,
                       r.trials, r.seed);
  }
  return out;
}

void write_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << format_csv(rows);
}

std::vector<MetricsRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_fields(line);
    if (f.size() != 11) throw std::runtime_error("csv: expected 11 fields in '" + line + "'");
    MetricsRow r;
    r.scheme = f[0];
    r.p_t_dbm = parse_double(f[1]);
    if (!f[2].empty()) r.nmse_range = parse_double(f[2]);
    if (!f[3].empty()) r.nmse_angle = parse_double(f[3]);
    r.mean_gain = parse_double(f[4]);
    r.success_rate = parse_double(f[5]);
    r.rate_bps_hz = parse_double(f[6]);
    r.flops = parse_int<std::int64_t>(f[7]);
    r.pilot_symbols = parse_int<int>(f[8]);
    r.trials = parse_int<int>(f[9]);
    r.seed = parse_int<std::uint64_t>(f[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MetricsRow> read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

const std::vector<std::string>& plot_metrics() {
  static const std::vector<std::string> m = {"nmse_range", "nmse_angle", "mean_gain",
                                             "success_rate", "rate_bps_hz"};
  return m;
}

std::string render_svg(const std::vector<MetricsRow>& rows, const std::string& metric) {
  const bool log_y = metric.rfind("nmse", 0) == 0;
  std::vector<std::string> schemes;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const MetricsRow& r : rows) {
    const auto v = metric_value(r, metric);
    if (!v || (log_y && !(*v > 0.0))) continue;
    const double y = log_y ? std::log10(*v) : *v;
    if (series.find(r.scheme) == series.end()) schemes.push_back(r.scheme);
    series[r.scheme].emplace_back(r.p_t_dbm, y);
    x_lo = std::min(x_lo, r.p_t_dbm);
    x_hi = std::max(x_hi, r.p_t_dbm);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  constexpr double kW = 640, kH = 420, kL = 70, kR = 160, kT = 40, kB = 55;
  if (schemes.empty()) {
    x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;
  auto px = [&](double x) { return kL + (x - x_lo) / (x_hi - x_lo) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y_lo) / (y_hi - y_lo) * (kH - kT - kB); };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kW, kH, kW, kH);
  s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kW, kH);
  s += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}{}</text>\n",
                   (kL + kW - kR) / 2, metric, log_y ? " (log10)" : "");
  s += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kL,
      kT, kW - kL - kR, kH - kT - kB);
  for (int k = 0; k <= 5; ++k) {
    const double xv = x_lo + (x_hi - x_lo) * k / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * k / 5.0;
    s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", px(xv),
                     kH - kB + 18, xv);
    s += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n", kL - 6,
                     py(yv) + 4, yv);
    s += fmt::format(
        "<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n", kL, py(yv),
        kW - kR, py(yv));
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">P_t (dBm)</text>\n",
                   (kL + kW - kR) / 2, kH - 12);
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    auto pts = series[schemes[i]];
    std::sort(pts.begin(), pts.end());
    std::string path;
    for (const auto& [x, y] : pts) path += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
    s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
                     color, path);
    for (const auto& [x, y] : pts) {
      s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(x), py(y),
                       color);
    }
    const double ly = kT + 16 + 20 * static_cast<double>(i);
    s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                     kW - kR + 12, ly, kW - kR + 36, ly, color);
    s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kW - kR + 42, ly + 4, schemes[i]);
  }
  s += "</svg>\n";
  return s;
}

std::vector<std::filesystem::path> write_plots(const std::vector<MetricsRow>& rows,
                                               const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const std::string& m : plot_metrics()) {
    const auto path = dir / (m + ".svg");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << render_svg(rows, m);
    out.push_back(path);
  }
  return out;
}

std::string format_table(const std::vector<MetricsRow>& rows) {
  std::string out = fmt::format("{:<16} {:>7} {:>11} {:>11} {:>8} {:>8} {:>8} {:>11} {:>7}\n",
                                "scheme", "P_t", "nmse_r", "nmse_th", "gain", "success",
                                "rate", "flops", "pilots");
  auto o = [](const std::optional<double>& v) { return v ? fmt::format("{:.4e}", *v) : "-"; };
  for (const MetricsRow& r : rows) {
    out += fmt::format("{:<16} {:>7.1f} {:>11} {:>11} {:>8.4f} {:>8.4f} {:>8.3f} {:>11} {:>7}\n",
                       r.scheme, r.p_t_dbm, o(r.nmse_range), o(r.nmse_angle), r.mean_gain,
                       r.success_rate, r.rate_bps_hz, r.flops, r.pilot_symbols);
  }
  return out;
}

}  // namespace nfba
