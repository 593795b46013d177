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

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "nfba/errors.hpp"
#include "nfba/finenet/network.hpp"
#include "nfba/metrics.hpp"
#include "nfba/monte_carlo.hpp"
#include "nfba/numerics.hpp"
#include "nfba/report.hpp"
#include "nfba/sim_config.hpp"

using namespace nfba;

namespace {

TrialRecord record(double theta0, double r0, std::optional<double> th, std::optional<double> r) {
  TrialRecord rec;
  rec.scheme = "x";
  rec.theta0 = theta0;
  rec.r0 = r0;
  rec.theta_est = th;
  rec.r_est = r;
  return rec;
}

SimConfig small_config() {
  SimConfig c = parse_config(
      "p_t_dbm = 0, 10\n"
      "trials = 5\n"
      "seed = 11\n"
      "schemes = proposed-coarse, ls, polar-exh, aswje\n");
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const SimConfig d = parse_config("");
  CHECK(d.sweep_dbm.size() == 13u);
  CHECK(d.sweep_dbm.front() == -10.0);
  CHECK(d.sweep_dbm.back() == 14.0);
  CHECK(d.trials == 2000);
  CHECK(d.schemes.size() == 5u);
  CHECK(d.array.n_antennas == 256);

  const SimConfig c = parse_config(
      "# comment\n"
      "n_antennas = 128\n"
      "carrier_ghz = 30\n"
      "p_t_dbm = -4:4:4\n"
      "trials = 7\n"
      "schemes = ls,aswje\n"
      "phi_max_deg = 45\n"
      "t_symbol_us = 2\n"
      "weights_path = w.bin\n");
  CHECK(c.array.n_antennas == 128);
  CHECK(c.array.carrier_hz == 30e9);
  CHECK(c.sweep_dbm == std::vector<double>{-4.0, 0.0, 4.0});
  CHECK(c.schemes == std::vector<std::string>{"ls", "aswje"});
  CHECK(c.phi_max_rad == doctest::Approx(kPi / 4.0));
  CHECK(c.t_symbol_s == doctest::Approx(2e-6));
  CHECK(c.weights_path == "w.bin");

  const SimConfig again = parse_config(to_string(c));
  CHECK(to_string(again) == to_string(c));

  CHECK(parse_sweep("1, 2.5,3") == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(parse_sweep("-10:14:2").size() == 13u);
  CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("trials = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("trials = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("schemes = magic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("p_t_dbm = 5:1:1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST_CASE("nmse") {
  std::vector<TrialRecord> perfect{record(0.1, 10.0, 0.1, 10.0), record(-0.3, 50.0, -0.3, 50.0)};
  const Nmse p = nmse(perfect);
  CHECK(*p.range == 0.0);
  CHECK(*p.angle == 0.0);

  std::vector<TrialRecord> none{record(0.1, 10.0, std::nullopt, std::nullopt)};
  CHECK_FALSE(nmse(none).range.has_value());
  CHECK_FALSE(nmse(none).angle.has_value());

  // Midpoint estimates under uniform priors on the range and physical angle.
  std::vector<TrialRecord> mid;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double u = (k + 0.5) / n;
    const double r0 = 4.0 + 76.0 * u;
    const double th0 = std::sin(-kPi / 3.0 + 2.0 * kPi / 3.0 * u);
    mid.push_back(record(th0, r0, 0.0, 42.0));
  }
  const double var = 76.0 * 76.0 / 12.0;
  const Nmse m = nmse(mid);
  CHECK(*m.range == doctest::Approx(var / (var + 42.0 * 42.0)).epsilon(1e-6));
  CHECK(*m.angle == doctest::Approx(1.0).epsilon(1e-12));

  // Streaming reference.
  std::vector<TrialRecord> mixed;
  double num_r = 0.0, den_r = 0.0, num_a = 0.0, den_a = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double th0 = std::sin(0.01 * k - 0.5), r0 = 4.0 + 0.7 * k;
    const double th = th0 + 0.001 * (k % 7), r = r0 * (1.0 + 0.01 * (k % 5));
    mixed.push_back(record(th0, r0, th, r));
    num_r += (r0 - r) * (r0 - r);
    den_r += r0 * r0;
    num_a += (th0 - th) * (th0 - th);
    den_a += th0 * th0;
  }
  CHECK(*nmse(mixed).range == doctest::Approx(num_r / den_r).epsilon(1e-12));
  CHECK(*nmse(mixed).angle == doctest::Approx(num_a / den_a).epsilon(1e-12));
}

TEST_CASE("success rate, mean gain and the binomial interval") {
  std::vector<TrialRecord> recs(4);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    recs[k].gain = 0.25 * static_cast<double>(k);
    recs[k].success = k % 2 == 0;
  }
  CHECK(success_rate(recs) == 0.5);
  CHECK(mean_gain(recs) == doctest::Approx(0.375));
  for (auto& r : recs) r.success = true;
  CHECK(success_rate(recs) == 1.0);
  for (auto& r : recs) r.success = false;
  CHECK(success_rate(recs) == 0.0);
  // Worst-case 95% half width at 10^4 trials.
  CHECK(1.96 * std::sqrt(0.25 / 1e4) < 0.01);
}

TEST_CASE("achievable rate") {
  TrialRecord r;
  r.gain = 0.9;
  r.h_norm = 1e-3;
  r.sigma2_mw = 1e-8;
  r.p_t_dbm = 10.0;
  r.pilot_symbols = 256;
  const double snr = 10.0 * 0.9 * 1e-3 / 1e-8;
  CHECK(achievable_rate(r, 1, 1.04e-6, 1e-2) ==
        doctest::Approx((1.0 - 256 * 1.04e-6 / 1e-2) * std::log2(1.0 + snr)).epsilon(1e-12));
  r.pilot_symbols = 4096;
  CHECK(achievable_rate(r, 16, 1.04e-6, 1e-2) ==
        doctest::Approx((1.0 - 256 * 1.04e-6 / 1e-2) * std::log2(1.0 + snr)).epsilon(1e-12));
  r.pilot_symbols = 100;
  CHECK(achievable_rate(r, 1, 1e-4, 1e-2) == 0.0);
  CHECK(achievable_rate(r, 1, 2e-4, 1e-2) == 0.0);
}

TEST_CASE("csv format") {
  CHECK(format_csv({}) == std::string(kCsvHeader) + "\n");
  MetricsRow a;
  a.scheme = "ls";
  a.p_t_dbm = -2.0;
  a.mean_gain = 0.123456789012345;
  a.success_rate = 0.5;
  a.rate_bps_hz = 7.25;
  a.flops = 523776;
  a.pilot_symbols = 256;
  a.trials = 10;
  a.seed = 3;
  MetricsRow b = a;
  b.scheme = "aswje";
  b.nmse_range = 0.01;
  b.nmse_angle = 1e-5;
  const std::string text = format_csv({a, b});
  CHECK(text.find("ls,-2,,,") != std::string::npos);
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 2u);
  CHECK_FALSE(rows[0].nmse_range.has_value());
  CHECK(*rows[1].nmse_range == 0.01);
  CHECK(format_csv(rows) == text);
  CHECK_THROWS_AS(parse_csv("wrong,header\n"), std::runtime_error);
}

TEST_CASE("svg plots") {
  MetricsRow a;
  a.scheme = "ls";
  a.nmse_range = 0.1;
  MetricsRow b = a;
  b.p_t_dbm = 2.0;
  b.nmse_range = 0.01;
  const std::string svg = render_svg({a, b}, "nmse_range");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(render_svg({a, b}, "nmse_range") == svg);
  const auto dir = std::filesystem::temp_directory_path() / "nfba_plot_test";
  std::filesystem::remove_all(dir);
  const auto paths = write_plots({a, b}, dir);
  CHECK(paths.size() == plot_metrics().size());
  for (const auto& p : paths) CHECK(std::filesystem::exists(p));
  std::filesystem::remove_all(dir);
}

TEST_CASE("worker count honours the environment cap") {
  ::setenv("NFA_THREADS", "2", 1);
  CHECK(worker_count(5) == 2);
  CHECK(worker_count(1) == 1);
  CHECK(worker_count() <= 2);
  ::unsetenv("NFA_THREADS");
  CHECK(worker_count(3) == 3);
  ::setenv("NFA_THREADS", "junk", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("NFA_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("simulator rows and determinism across worker counts") {
  const SimConfig cfg = small_config();
  const Simulator sim(cfg);
  const auto rows1 = sim.run(1);
  const auto rows3 = sim.run(3);
  CHECK(rows1.size() == cfg.schemes.size() * cfg.sweep_dbm.size());
  CHECK(format_csv(rows1) == format_csv(rows3));
  CHECK(format_csv(sim.run(2)) == format_csv(rows1));
  for (const auto& r : rows1) {
    CHECK(r.trials == 5);
    CHECK(r.success_rate >= 0.0);
    CHECK(r.success_rate <= 1.0);
    CHECK(r.mean_gain <= 1.0 + 1e-12);
    if (r.scheme == "ls" || r.scheme == "polar-exh") {
      CHECK_FALSE(r.nmse_range.has_value());
    } else {
      CHECK(r.nmse_range.has_value());
    }
  }
  CHECK(rows1.front().scheme == "proposed-coarse");
  CHECK(rows1.front().p_t_dbm == 0.0);

  const auto a = sim.run_trial(3);
  const auto b = sim.run_trial(3);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].gain == b[k].gain);
    CHECK(a[k].success == (a[k].gain >= a[k].genie));
  }
}

TEST_CASE("proposed scheme requires a matching network") {
  SimConfig cfg = small_config();
  cfg.schemes = {"proposed"};
  CHECK_THROWS_AS(Simulator(cfg, nullptr), ConfigError);
  auto mini = std::make_shared<finenet::FineNet>(finenet::NetConfig::miniature());
  CHECK_THROWS_AS(Simulator(cfg, mini), ConfigError);
  auto full = std::make_shared<finenet::FineNet>();
  const Simulator sim(cfg, full);
  const auto rows = sim.run(1);
  CHECK(rows.size() == 2u);
  CHECK(rows[0].flops == 4359 + 755372);
  CHECK(rows[0].pilot_symbols == 256);
}

TEST_CASE("coarse beam on a noiseless on-grid user") {
  SimConfig cfg = small_config();
  cfg.array.noise_psd_dbm_per_hz = -300.0;
  const Simulator sim(cfg);
  const DftCodebook dft(cfg.array);
  for (int m : {90, 128, 170}) {
    for (double r : {4.0, 5.0, 20.0, 70.0}) {
      const ComplexVector h = channel(UePosition::from_theta(cfg.array.grid_angle(m), r), cfg.array);
      const double p_t = dbm_to_mw(10.0);
      const ComplexVector y = std::sqrt(p_t) * dft.analyze(h);
      const BeamDecision d = sim.proposed_coarse(y, p_t);
      CHECK(beam_gain(d.beam, h) >= 0.999);
    }
  }
}

TEST_CASE("one trial of every scheme runs quickly") {
  SimConfig cfg = small_config();
  cfg.sweep_dbm = {10.0};
  cfg.schemes = {"proposed", "proposed-coarse", "ls", "polar-exh", "aswje"};
  const Simulator sim(cfg, std::make_shared<finenet::FineNet>());
  sim.run_trial(0);
  const auto start = std::chrono::steady_clock::now();
  const auto recs = sim.run_trial(1);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  MESSAGE("one trial of five schemes: " << ms << " ms");
  CHECK(recs.size() == 5u);
  CHECK(ms < 5 * 50.0);
}
