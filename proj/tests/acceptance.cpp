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

// Acceptance runner. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero when any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nfba/baselines.hpp"
#include "nfba/coarse.hpp"
#include "nfba/finenet/dataset.hpp"
#include "nfba/finenet/network.hpp"
#include "nfba/finenet/trainer.hpp"
#include "nfba/finenet/weights_io.hpp"
#include "nfba/flops.hpp"
#include "nfba/monte_carlo.hpp"
#include "nfba/numerics.hpp"
#include "nfba/report.hpp"
#include "nfba/sim_config.hpp"
#include "oracles.hpp"

using namespace nfba;

namespace {

struct Options {
  int epochs = 30;
  int trials = 2000;
  int samples = 20000;
  std::string weights;
  std::string save_weights;
};

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(fmt::format("{}{}", ok ? "" : "!", what));
  }
};

const ArrayConfig kCfg{};

void note(const std::string& text) { fmt::print("    {}\n", text); }

SimConfig base_config() {
  SimConfig cfg = parse_config("");
  cfg.sweep_dbm = parse_sweep("-10:14:2");
  cfg.schemes = {"proposed", "proposed-coarse", "ls", "polar-exh", "aswje"};
  cfg.seed = 1;
  return cfg;
}

// ---------------------------------------------------------------------------

Outcome constants() {
  Outcome o;
  const int u = finenet::input_length(kCfg, 0.1);
  o.check(u == 49, fmt::format("U={}", u));
  o.check(std::abs(kCfg.noise_dbm() - (-84.7058)) <= 1e-3, fmt::format("sigma2={:.5f} dBm", kCfg.noise_dbm()));
  o.check(std::abs(kCfg.rayleigh_distance() - 348.35) <= 0.1,
          fmt::format("Rayleigh={:.3f} m", kCfg.rayleigh_distance()));
  const PolarCodebook pc(kCfg, 1.2, 16);
  o.check(pc.size() == 4096, fmt::format("NQ={}", pc.size()));
  const finenet::FineNet net;
  o.check(net.trainable_count() == 81888, fmt::format("params={}", net.trainable_count()));
  return o;
}

Outcome complexity() {
  Outcome o;
  auto eq = [&](const char* name, std::int64_t got, std::int64_t want) {
    o.check(got == want, fmt::format("{}={}", name, got));
  };
  eq("coarse", flops::coarse(256), 4359);
  eq("fine", flops::fine(49), 755372);
  eq("ls", flops::ls(256), 523776);
  eq("polar", flops::polar_exhaustive(256, 16), 16383);
  eq("dnbt", flops::dnbt(256, 16, 16, 20), 295056463);
  eq("dft-dnn", flops::dft_dnn(256, 16, 20), 52576LL * 256 + 13862144 + 2047LL * 272 + 79);
  const double rel = std::abs(static_cast<double>(flops::fine_approx(49) - flops::fine(49))) /
                     static_cast<double>(flops::fine(49));
  o.check(rel < 0.10, fmt::format("fine approx rel err {:.3f}", rel));

  const DftCodebook dft(kCfg);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> ph(-kPi / 3.0, kPi / 3.0), rr(4.0, 80.0);
  std::uint64_t worst = 0;
  for (int k = 0; k < 200; ++k) {
    const ComplexVector h = channel(UePosition::from_phi(ph(gen), rr(gen)), kCfg);
    const double p_t = dbm_to_mw(-10.0 + 2.0 * (k % 13));
    KeyedRng rng(2, static_cast<std::uint64_t>(k), StreamTag::kDftNoise);
    const ComplexVector y = measure(h, p_t, kCfg.noise_mw(), dft, rng);
    std::uint64_t count = 0;
    coarse_align_counted(y, p_t, kCfg, 0.1, default_gamma(p_t), count);
    worst = std::max(worst, count);
  }
  o.check(worst <= 17u * 256u + 7u, fmt::format("counted coarse max {} <= {}", worst, 17 * 256 + 7));
  return o;
}

Outcome bounds() {
  Outcome o;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> th(-std::sin(kPi / 3.0), std::sin(kPi / 3.0)), rr(4.0, 80.0);
  std::uniform_int_distribution<int> ll(1, 127);
  int tested = 0, violations = 0;
  while (tested < 10000) {
    const double t = th(gen), r = rr(gen);
    const int l = ll(gen);
    const SpreadParams p = spread_params(t, r, l, kCfg);
    if (!(p.w > 0.0)) continue;
    ++tested;
    if (!(rho_fresnel(t, r, l, kCfg) < rho_upper_bound(p.w, p.delta))) ++violations;
  }
  o.check(violations == 0, fmt::format("bound violations {}/{}", violations, tested));

  std::uniform_real_distribution<double> ph(-kPi / 3.0, kPi / 3.0);
  int outside = 0, leaks = 0;
  for (int k = 0; k < 200; ++k) {
    const double theta = std::sin(ph(gen));
    const double r = rr(gen);
    const int zeta = nearest_grid_index(theta, kCfg);
    const double grid = kCfg.grid_angle(zeta);
    const std::vector<int> w = epsilon_subspace(zeta, r, 0.1, kCfg);
    for (int l = -127; l <= 128; ++l) {
      const int idx = ((zeta - 1 + l) % 256 + 256) % 256 + 1;
      if (std::find(w.begin(), w.end(), idx) != w.end()) continue;
      ++outside;
      if (!(rho_fresnel(grid, r, l, kCfg) < 0.1)) ++leaks;
    }
  }
  o.check(leaks == 0, fmt::format("subspace leaks {}/{} columns", leaks, outside));
  return o;
}

Outcome approximations() {
  Outcome o;
  double worst = 0.0;
  for (int k = 0; k <= 20000; ++k) {
    const double x = -50.0 + 100.0 * k / 20000.0;
    const CornuPoint p = fresnel(x);
    const auto [c, s] = oracle::fresnel(x);
    worst = std::max({worst, std::abs(p.c - c), std::abs(p.s - s)});
  }
  o.check(worst <= 1e-10, fmt::format("fresnel max err {:.2e}", worst));

  const double t_max = std::sin(kPi / 3.0);
  double env = 0.0, at_t = 0.0, at_r = 0.0;
  int at_l = 0;
  for (int i = 0; i < 64; ++i) {
    const double theta = -t_max + 2.0 * t_max * i / 63.0;
    for (int j = 0; j < 64; ++j) {
      const double r = 4.0 + 76.0 * j / 63.0;
      for (int l = 0; l < 16; ++l) {
        const double e = std::abs(rho_exact(theta, r, l, kCfg) - rho_fresnel(theta, r, l, kCfg));
        if (e > env) {
          env = e;
          at_t = theta;
          at_r = r;
          at_l = l;
        }
      }
    }
  }
  o.check(env <= 1e-2, fmt::format("fidelity envelope {:.4f} at theta={:.3f} r={:.1f} l={}", env, at_t,
                                   at_r, at_l));

  const Vec2 c = osculating_center(0.6416, 1.0 / 0.6416);
  o.check(std::abs(c.x - 0.0072) < 1e-3 && std::abs(c.y - 1.5154) < 1e-3,
          fmt::format("override center ({:.4f}, {:.4f})", c.x, c.y));
  return o;
}

// ---------------------------------------------------------------------------

struct RandomBatch {
  std::vector<double> inputs;
  std::vector<std::uint8_t> masks;
  std::vector<int> targets;
};

RandomBatch random_batch(int batch, int u, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> v(0.0, 1.0);
  RandomBatch rb;
  for (int b = 0; b < batch; ++b) {
    const int valid = 1 + static_cast<int>(gen() % static_cast<unsigned>(u));
    for (int j = 0; j < u; ++j) {
      rb.inputs.push_back(j < valid ? v(gen) : 0.0);
      rb.masks.push_back(j < valid ? 1 : 0);
    }
    rb.targets.push_back(static_cast<int>(gen() % static_cast<unsigned>(valid)));
  }
  return rb;
}

Outcome network() {
  using namespace finenet;
  Outcome o;
  {
    FineNet net(NetConfig::miniature());
    net.init(9);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    for (Param& p : net.params()) {
      if (!p.trainable) continue;
      if (p.name.find(".bn.") != std::string::npos || p.name.find("prelu") != std::string::npos) {
        for (double& v : p.value.data) v += jitter(gen);
      }
    }
    const int batch = 4;
    const RandomBatch rb = random_batch(batch, 9, 5);
    auto loss = [&] {
      KeyedRng drop(5, 0, StreamTag::kDropout);
      net.forward(rb.inputs, rb.masks, batch, Mode::kTrain, &drop);
      return net.loss(rb.targets);
    };
    net.zero_grad();
    loss();
    net.backward(rb.targets);
    const double h = 1e-4;
    double worst = 0.0;
    for (Param& p : net.params()) {
      if (!p.trainable) continue;
      for (std::size_t k = 0; k < p.value.numel(); ++k) {
        const double saved = p.value[k];
        p.value[k] = saved + h;
        const double up = loss();
        p.value[k] = saved - h;
        const double down = loss();
        p.value[k] = saved;
        const double fd = (up - down) / (2.0 * h);
        const double an = p.grad[k];
        worst = std::max(worst, std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-6}));
      }
    }
    o.check(worst <= 1e-4, fmt::format("gradient rel err {:.1e}", worst));
  }
  {
    FineNet net(NetConfig::miniature());
    net.init(8);
    Adam opt(net);
    Batch b;
    b.size = 1;
    b.inputs = {0.2, 0.5, 1.0, 0.6, 0.1, 0.0, 0.0, 0.0, 0.0};
    b.masks = {1, 1, 1, 1, 1, 0, 0, 0, 0};
    b.targets = {3};
    double loss = 1.0;
    int steps = 0;
    while (steps < 500 && loss >= 1e-3) {
      loss = train_step(net, opt, b, 1e-2, nullptr);
      ++steps;
    }
    net.forward(b.inputs, b.masks, 1, Mode::kTrain);
    const double final_loss = net.loss(b.targets);
    o.check(final_loss < 1e-3, fmt::format("overfit J={:.1e} in {} steps", final_loss, steps));
  }
  {
    FineNet net;
    net.init(4);
    RandomBatch rb = random_batch(8, 49, 11);
    const std::vector<double> before = net.forward(rb.inputs, rb.masks, 8, Mode::kEval);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> v(-5.0, 5.0);
    for (std::size_t k = 0; k < rb.inputs.size(); ++k) {
      if (!rb.masks[k]) rb.inputs[k] = v(gen);
    }
    o.check(before == net.forward(rb.inputs, rb.masks, 8, Mode::kEval), "mask invariance");
  }
  {
    DatasetSpec spec;
    spec.samples = 96;
    spec.seed = 5;
    spec.array.r_min = 40.0;
    const Dataset data = generate_dataset(spec);
    TrainConfig tc;
    tc.max_epochs = 3;
    tc.batch_size = 16;
    tc.seed = 2;
    FineNet a(NetConfig::miniature()), b(NetConfig::miniature());
    const TrainReport ra = train(a, data.samples, tc);
    const TrainReport rb = train(b, data.samples, tc);
    o.check(ra.val_loss == rb.val_loss && serialize_weights(a) == serialize_weights(b),
            "training reproducible");
  }
  return o;
}

// ---------------------------------------------------------------------------

std::shared_ptr<finenet::FineNet> obtain_network(const SimConfig& cfg, const Options& opt) {
  if (!opt.weights.empty() && std::filesystem::exists(opt.weights)) {
    auto net = std::make_shared<finenet::FineNet>();
    finenet::load_weights(*net, opt.weights);
    note(fmt::format("loaded weights from {}", opt.weights));
    return net;
  }
  const TrainedNetwork t = train_fine_network(cfg, false);
  note(fmt::format("trained on {} samples (discard rate {:.3f}), {} epochs, best val loss {:.4f}",
                   t.samples, t.discard_rate, t.report.epochs_run, t.report.best_val_loss));
  if (!opt.save_weights.empty()) finenet::save_weights(*t.net, opt.save_weights);
  return t.net;
}

const MetricsRow& find_row(const std::vector<MetricsRow>& rows, const std::string& scheme, double p) {
  for (const auto& r : rows) {
    if (r.scheme == scheme && std::abs(r.p_t_dbm - p) < 1e-9) return r;
  }
  throw std::runtime_error("missing row " + scheme);
}

Outcome performance(const Options& opt) {
  Outcome o;
  SimConfig cfg = base_config();
  cfg.trials = opt.trials;
  cfg.training.samples = opt.samples;
  cfg.training.max_epochs = opt.epochs;

  {
    SimConfig quiet = cfg;
    quiet.schemes = {"proposed-coarse"};
    quiet.array.noise_psd_dbm_per_hz = -300.0;
    const Simulator sim(quiet);
    const DftCodebook dft(quiet.array);
    const double p_ref = dbm_to_mw(10.0);
    double worst = 1.0;
    for (int m = 1; m <= 256; ++m) {
      const double theta = quiet.array.grid_angle(m);
      if (std::abs(theta) > std::sin(kPi / 3.0)) continue;
      for (double r : {4.0, 6.0, 10.0, 20.0, 40.0, 80.0}) {
        const ComplexVector h = channel(UePosition::from_theta(theta, r), quiet.array);
        const ComplexVector y = std::sqrt(p_ref) * dft.analyze(h);
        worst = std::min(worst, beam_gain(sim.proposed_coarse(y, p_ref).beam, h));
      }
    }
    o.check(worst >= 0.999, fmt::format("(a) noiseless coarse gain min {:.5f} at 10 dBm", worst));
  }

  const auto net = obtain_network(cfg, opt);
  const Simulator sim(cfg, net);
  const std::vector<MetricsRow> rows = sim.run();
  fmt::print("{}", format_table(rows));

  const double p10 = 10.0;
  const double fine = find_row(rows, "proposed", p10).success_rate;
  const double coarse = find_row(rows, "proposed-coarse", p10).success_rate;
  const double asw = find_row(rows, "aswje", p10).success_rate;
  o.check(fine >= coarse && coarse >= asw,
          fmt::format("(b) success at 10 dBm fine {:.3f} >= coarse {:.3f} >= aswje {:.3f}", fine, coarse, asw));
  o.check(fine >= 0.9, fmt::format("(b) fine success {:.3f} >= 0.9", fine));

  int better = 0;
  for (double p : cfg.sweep_dbm) {
    const auto& a = find_row(rows, "proposed", p).nmse_range;
    const auto& b = find_row(rows, "aswje", p).nmse_range;
    if (a && b && *a < *b) ++better;
  }
  o.check(better == static_cast<int>(cfg.sweep_dbm.size()),
          fmt::format("(c) range NMSE below aswje at {}/{} powers", better, cfg.sweep_dbm.size()));

  const double rp = find_row(rows, "polar-exh", p10).rate_bps_hz;
  const double rf = find_row(rows, "proposed", p10).rate_bps_hz;
  o.check(rp < rf, fmt::format("(d) rate polar-exh {:.2f} < proposed {:.2f}", rp, rf));

  const DftCodebook dft(kCfg);
  const double p_t = dbm_to_mw(6.0);
  int covered = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    KeyedRng user(99, static_cast<std::uint64_t>(t), StreamTag::kUser);
    const UePosition ue = UePosition::from_phi(user.uniform(-kPi / 3.0, kPi / 3.0), user.uniform(4.0, 80.0));
    KeyedRng noise(99, static_cast<std::uint64_t>(t), StreamTag::kDftNoise);
    const ComplexVector y = measure(channel(ue, kCfg), p_t, kCfg.noise_mw(), dft, noise);
    const CoarseResult res = coarse_align(y, p_t, kCfg, 0.1, default_gamma(p_t));
    const int zeta = nearest_grid_index(ue.theta, kCfg);
    if (std::find(res.subspace.begin(), res.subspace.end(), zeta) != res.subspace.end()) ++covered;
  }
  const double coverage = static_cast<double>(covered) / trials;
  o.check(coverage >= 0.99, fmt::format("coverage at 6 dBm {:.3f}", coverage));
  return o;
}

Outcome determinism() {
  Outcome o;
  SimConfig cfg = base_config();
  cfg.trials = 60;
  cfg.sweep_dbm = {-6.0, 4.0, 12.0};
  auto net = std::make_shared<finenet::FineNet>();
  net->init(17);
  const Simulator sim(cfg, net);
  const std::string one = format_csv(sim.run(1));
  for (int threads : {2, 4}) {
    o.check(format_csv(sim.run(threads)) == one, fmt::format("{} threads identical", threads));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nfba acceptance checks"};
  int criterion = 0;
  Options opt;
  app.add_option("--criterion", criterion, "criterion to run (0 = all)")->check(CLI::Range(0, 7));
  app.add_option("--epochs", opt.epochs, "training epochs for the performance criterion");
  app.add_option("--trials", opt.trials, "Monte Carlo trials for the performance criterion");
  app.add_option("--samples", opt.samples, "training samples for the performance criterion");
  app.add_option("--weights", opt.weights, "load network weights instead of training");
  app.add_option("--save-weights", opt.save_weights, "write the trained network here");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
      {1, {"constants and sizes", constants}},
      {2, {"complexity accounting", complexity}},
      {3, {"correlation bound and subspace", bounds}},
      {4, {"fresnel accuracy and approximation fidelity", approximations}},
      {5, {"network gradients and training", network}},
      {6, {"end-to-end performance", [&] { return performance(opt); }}},
      {7, {"thread-count determinism", determinism}},
  };

  bool all = true;
  for (const auto& [id, entry] : criteria) {
    if (criterion != 0 && criterion != id) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    fmt::print("[{}] criterion {}: {} ({})\n", o.pass ? "PASS" : "FAIL", id, entry.first,
               fmt::join(o.details, "; "));
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
