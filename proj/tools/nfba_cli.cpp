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

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nfba/errors.hpp"
#include "nfba/finenet/dataset.hpp"
#include "nfba/finenet/trainer.hpp"
#include "nfba/finenet/weights_io.hpp"
#include "nfba/flops.hpp"
#include "nfba/monte_carlo.hpp"
#include "nfba/report.hpp"
#include "nfba/sim_config.hpp"

namespace fs = std::filesystem;
using namespace nfba;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Relative paths inside a config file are taken relative to that file.
std::string resolve(const fs::path& config, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (config.parent_path() / p).string();
}

std::shared_ptr<const finenet::FineNet> load_network(const SimConfig& cfg) {
  if (cfg.weights_path.empty()) return nullptr;
  finenet::NetConfig nc;
  nc.input_len = finenet::input_length(cfg.array, cfg.epsilon);
  auto net = std::make_shared<finenet::FineNet>(nc);
  try {
    finenet::load_weights(*net, cfg.weights_path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(fmt::format("weights {}: {}", cfg.weights_path, e.what()));
  }
  return net;
}

SimConfig read_config(const fs::path& path) {
  SimConfig cfg = load_config(path);
  cfg.weights_path = resolve(path, cfg.weights_path);
  cfg.csv_path = resolve(path, cfg.csv_path);
  cfg.plot_dir = resolve(path, cfg.plot_dir);
  return cfg;
}

std::vector<MetricsRow> simulate(const SimConfig& cfg) {
  const bool wants_fine =
      std::find(cfg.schemes.begin(), cfg.schemes.end(), "proposed") != cfg.schemes.end();
  const Simulator sim(cfg, wants_fine ? load_network(cfg) : nullptr);
  return sim.run();
}

int cmd_flops(const SimConfig& cfg) {
  const int n = cfg.array.n_antennas;
  const int q = cfg.polar_rings;
  const int u = finenet::input_length(cfg.array, cfg.epsilon);
  const AswjeEstimator aswje(cfg.array, {cfg.aswje_kappa2, cfg.aswje_k_a});
  constexpr int kB = 20;
  constexpr int kChi = 16;
  fmt::print("N = {}, Q = {}, U = {}\n", n, q, u);
  fmt::print("{:<22} {:>14} {:>8}\n", "scheme", "flops", "pilots");
  auto row = [&](std::string_view name, std::int64_t f, int pilots) {
    fmt::print("{:<22} {:>14} {:>8}\n", name, f, flops::pilots_with_rf_chains(pilots, cfg.n_rf));
  };
  row("proposed", flops::coarse(n) + flops::fine(u), flops::pilots::proposed(n));
  row("proposed-coarse", flops::coarse(n), flops::pilots::proposed(n));
  row("ls", flops::ls(n), flops::pilots::ls(n));
  row("polar-exh", flops::polar_exhaustive(n, q), flops::pilots::polar_exhaustive(n, q));
  row("aswje",
      flops::aswje(n, cfg.aswje_k_a, aswje.varpi_min(), aswje.varpi_max(), 0.1),
      cfg.aswje_k_a == 1 ? n : flops::pilots::aswje(n, cfg.aswje_k_a));
  row("dft-dnn", flops::dft_dnn(n, q, kB), flops::pilots::dft_dnn(n, kB));
  row("dnbt", flops::dnbt(n, q, kChi, kB), flops::pilots::dnbt(n, q, kChi, kB));
  fmt::print("fine stage exact {} / collapsed {}\n", flops::fine(u), flops::fine_approx(u));
  return 0;
}

int cmd_train(const SimConfig& cfg, const std::string& out) {
  const TrainedNetwork t = train_fine_network(cfg, true);
  finenet::save_weights(*t.net, out);
  fmt::print("trained {} epochs, best validation loss {:.6f} at epoch {}; wrote {}\n",
             t.report.epochs_run, t.report.best_val_loss, t.report.best_epoch + 1, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-field beam alignment simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, schemes;
  int trials = 0;
  std::uint64_t seed = 0;

  auto* sim = app.add_subcommand("simulate", "Run the Monte Carlo sweep and print metrics");
  sim->add_option("--config", config_path, "Configuration file")->required();
  auto* trials_opt = sim->add_option("--trials", trials, "Override the trial count");
  auto* seed_opt = sim->add_option("--seed", seed, "Override the master seed");
  auto* schemes_opt = sim->add_option("--schemes", schemes, "Comma-separated scheme list");

  auto* train = app.add_subcommand("train", "Generate a dataset and train the fine network");
  train->add_option("--config", config_path, "Configuration file")->required();
  train->add_option("--out", out_path, "Output weight file")->required();

  auto* fl = app.add_subcommand("flops", "Print complexity and pilot counts");
  fl->add_option("--config", config_path, "Configuration file")->required();

  auto* sweep = app.add_subcommand("sweep", "Run the sweep and write a CSV");
  sweep->add_option("--config", config_path, "Configuration file")->required();
  sweep->add_option("--out", out_path, "Output CSV path")->required();

  auto* plot = app.add_subcommand("plot", "Render SVG charts from a CSV");
  plot->add_option("--csv", csv_path, "Input CSV")->required();
  plot->add_option("--out-dir", out_path, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (plot->parsed()) {
      const auto paths = write_plots(read_csv(csv_path), out_path);
      for (const auto& p : paths) fmt::print("{}\n", p.string());
      return 0;
    }
    SimConfig cfg = read_config(config_path);
    if (sim->parsed()) {
      if (*trials_opt) cfg.trials = trials;
      if (*seed_opt) cfg.seed = seed;
      if (*schemes_opt) cfg.schemes = parse_config("schemes = " + schemes).schemes;
      cfg.validate();
      const auto rows = simulate(cfg);
      fmt::print("{}", format_table(rows));
      if (!cfg.csv_path.empty()) write_csv(rows, cfg.csv_path);
      if (!cfg.plot_dir.empty()) write_plots(rows, cfg.plot_dir);
      return 0;
    }
    if (train->parsed()) return cmd_train(cfg, out_path);
    if (fl->parsed()) return cmd_flops(cfg);
    if (sweep->parsed()) {
      write_csv(simulate(cfg), out_path);
      return 0;
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "nfba: configuration error: {}\n", e.what());
    return kExitConfig;
  } catch (const NumericalAbort& e) {
    fmt::print(stderr, "nfba: numerical abort: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    fmt::print(stderr, "nfba: error: {}\n", e.what());
    return 1;
  }
  return 0;
}
