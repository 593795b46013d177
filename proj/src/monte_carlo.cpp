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

#include "nfba/monte_carlo.hpp"

#include <atomic>
#include <cstdlib>
#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "nfba/coarse.hpp"
#include "nfba/errors.hpp"
#include "nfba/finenet/dataset.hpp"
#include "nfba/flops.hpp"

namespace nfba {

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("NFA_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

finenet::DatasetSpec dataset_spec(const SimConfig& cfg) {
  finenet::DatasetSpec spec;
  spec.array = cfg.array;
  spec.samples = cfg.training.samples;
  spec.p_min_dbm = *std::min_element(cfg.sweep_dbm.begin(), cfg.sweep_dbm.end());
  spec.p_max_dbm = *std::max_element(cfg.sweep_dbm.begin(), cfg.sweep_dbm.end());
  spec.phi_max = cfg.phi_max_rad;
  spec.epsilon = cfg.epsilon;
  spec.gamma_exponent = cfg.gamma_exponent;
  spec.seed = cfg.training.seed;
  return spec;
}

finenet::TrainConfig train_config(const SimConfig& cfg) {
  finenet::TrainConfig tc;
  tc.max_epochs = cfg.training.max_epochs;
  tc.batch_size = cfg.training.batch_size;
  tc.lr = cfg.training.lr;
  tc.patience = cfg.training.patience;
  tc.seed = cfg.training.seed;
  return tc;
}

TrainedNetwork train_fine_network(const SimConfig& cfg, bool verbose) {
  const finenet::Dataset data = finenet::generate_dataset(dataset_spec(cfg));
  if (verbose) {
    fmt::print(stderr, "dataset: {} samples, discard rate {:.4f}\n", data.samples.size(),
               data.discard_rate());
  }
  finenet::NetConfig nc;
  nc.input_len = finenet::input_length(cfg.array, cfg.epsilon);
  TrainedNetwork out;
  out.net = std::make_shared<finenet::FineNet>(nc);
  out.net->init(cfg.training.seed);
  finenet::TrainConfig tc = train_config(cfg);
  tc.verbose = verbose;
  out.report = finenet::train(*out.net, data.samples, tc);
  out.samples = data.samples.size();
  out.discard_rate = data.discard_rate();
  return out;
}

Simulator::Simulator(const SimConfig& cfg, std::shared_ptr<const finenet::FineNet> net)
    : cfg_(cfg),
      dft_(cfg.array),
      polar_(cfg.array, cfg.polar_beta, cfg.polar_rings),
      aswje_(cfg.array, AswjeConfig{cfg.aswje_kappa2, cfg.aswje_k_a}),
      net_(std::move(net)),
      input_len_(finenet::input_length(cfg.array, cfg.epsilon)) {
  cfg_.validate();
  const bool wants_fine =
      std::find(cfg_.schemes.begin(), cfg_.schemes.end(), "proposed") != cfg_.schemes.end();
  if (wants_fine) {
    if (!net_) throw ConfigError("scheme 'proposed' needs trained weights (weights_path)");
    if (net_->config().input_len != input_len_) {
      throw ConfigError(fmt::format("network input length {} does not match U = {}",
                                    net_->config().input_len, input_len_));
    }
  }
}

std::int64_t Simulator::scheme_flops(const std::string& s) const {
  const int n = cfg_.array.n_antennas;
  if (s == "proposed") return flops::coarse(n) + flops::fine(net_ ? net_->config() : finenet::NetConfig{});
  if (s == "proposed-coarse") return flops::coarse(n);
  if (s == "ls") return flops::ls(n);
  if (s == "polar-exh") return flops::polar_exhaustive(n, cfg_.polar_rings);
  if (s == "aswje") {
    return flops::aswje(n, cfg_.aswje_k_a, aswje_.varpi_min(), aswje_.varpi_max(), 0.1);
  }
  throw ConfigError("unknown scheme " + s);
}

int Simulator::scheme_pilots(const std::string& s) const {
  const int n = cfg_.array.n_antennas;
  if (s == "proposed" || s == "proposed-coarse") return flops::pilots::proposed(n);
  if (s == "ls") return flops::pilots::ls(n);
  if (s == "polar-exh") return flops::pilots::polar_exhaustive(n, cfg_.polar_rings);
  if (s == "aswje") return cfg_.aswje_k_a == 1 ? n : flops::pilots::aswje(n, cfg_.aswje_k_a);
  throw ConfigError("unknown scheme " + s);
}

BeamDecision Simulator::proposed_coarse(const ComplexVector& y, double p_t_mw) const {
  const CoarseResult c = coarse_align(y, p_t_mw, cfg_.array, cfg_.epsilon,
                                      default_gamma(p_t_mw, cfg_.gamma_exponent));
  BeamDecision d;
  d.scheme = "proposed-coarse";
  d.pilot_symbols = flops::pilots::proposed(cfg_.array.n_antennas);
  d.theta_est = c.angle_est;
  d.r_est = c.range_est;
  d.beam = steering_vector(c.angle_est, c.range_est, cfg_.array);
  return d;
}

BeamDecision Simulator::proposed(const ComplexVector& y, double p_t_mw, finenet::FineNet& net) const {
  const CoarseResult c = coarse_align(y, p_t_mw, cfg_.array, cfg_.epsilon,
                                      default_gamma(p_t_mw, cfg_.gamma_exponent));
  const finenet::TrainSample s = finenet::build_input(y, c, input_len_, cfg_.array);
  const std::vector<double> probs = net.forward(s.input, s.mask, 1, finenet::Mode::kEval);
  const double theta = std::clamp(finenet::refine_angle(probs, s), -1.0, 1.0);
  BeamDecision d;
  d.scheme = "proposed";
  d.pilot_symbols = flops::pilots::proposed(cfg_.array.n_antennas);
  d.theta_est = theta;
  d.r_est = c.range_est;
  d.beam = steering_vector(theta, c.range_est, cfg_.array);
  return d;
}

std::vector<TrialRecord> Simulator::run_trial(std::uint64_t trial) const {
  std::unique_ptr<finenet::FineNet> copy;
  if (net_) copy = std::make_unique<finenet::FineNet>(*net_);
  return run_trial(trial, copy.get());
}

std::vector<TrialRecord> Simulator::run_trial(std::uint64_t trial, finenet::FineNet* net) const {
  const ArrayConfig& a = cfg_.array;
  KeyedRng user(cfg_.seed, trial, StreamTag::kUser);
  const double phi = user.uniform(-cfg_.phi_max_rad, cfg_.phi_max_rad);
  const double r0 = user.uniform(cfg_.ue_r_min, cfg_.ue_r_max);
  const UePosition ue = UePosition::from_phi(phi, r0);
  const ComplexVector h = channel(ue, a);
  const double h_norm = h.norm();
  const std::vector<Complex> corr = polar_.correlate(h);
  const double genie = genie_polar_best(corr, h_norm);
  const double sigma2 = a.noise_mw();
  const auto n_pow = static_cast<std::uint64_t>(cfg_.sweep_dbm.size());

  std::vector<TrialRecord> out;
  out.reserve(cfg_.sweep_dbm.size() * cfg_.schemes.size());
  for (std::uint64_t p = 0; p < n_pow; ++p) {
    const double p_dbm = cfg_.sweep_dbm[p];
    const double p_mw = dbm_to_mw(p_dbm);
    const std::uint64_t key = trial * n_pow + p;
    KeyedRng dft_noise(cfg_.seed, key, StreamTag::kDftNoise);
    const ComplexVector y = measure(h, p_mw, sigma2, dft_, dft_noise);
    for (const std::string& scheme : cfg_.schemes) {
      TrialRecord rec;
      rec.scheme = scheme;
      rec.p_t_dbm = p_dbm;
      rec.theta0 = ue.theta;
      rec.r0 = r0;
      rec.genie = genie;
      rec.h_norm = h_norm;
      rec.sigma2_mw = sigma2;
      rec.pilot_symbols = scheme_pilots(scheme);
      try {
        BeamDecision d;
        if (scheme == "proposed") {
          if (net == nullptr) throw ConfigError("scheme 'proposed' needs a network");
          d = proposed(y, p_mw, *net);
        } else if (scheme == "proposed-coarse") {
          d = proposed_coarse(y, p_mw);
        } else if (scheme == "ls") {
          d = ls_baseline(y, p_mw, dft_, a);
        } else if (scheme == "polar-exh") {
          KeyedRng noise(cfg_.seed, key, StreamTag::kPolarNoise);
          d = polar_exhaustive(corr, p_mw, sigma2, polar_, noise);
        } else if (scheme == "aswje") {
          KeyedRng noise(cfg_.seed, key, StreamTag::kProbeNoise);
          d = aswje_.estimate(y, h, p_mw, sigma2, noise);
        }
        rec.theta_est = d.theta_est;
        rec.r_est = d.r_est;
        rec.gain = beam_gain(d.beam, h);
        rec.success = rec.gain >= genie;
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        fmt::print(stderr, "nfba: {} failed on trial {} at {} dBm: {}\n", scheme, trial, p_dbm,
                   e.what());
        rec.gain = 0.0;
        rec.success = false;
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<std::vector<TrialRecord>> Simulator::run_all(int threads) const {
  const auto n = static_cast<std::size_t>(cfg_.trials);
  std::vector<std::vector<TrialRecord>> records(n);
  const int workers = std::max(1, std::min<int>(threads > 0 ? worker_count(threads) : worker_count(),
                                                static_cast<int>(n)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    std::unique_ptr<finenet::FineNet> net;
    if (net_) net = std::make_unique<finenet::FineNet>(*net_);
    try {
      for (std::size_t t = next++; t < n; t = next++) records[t] = run_trial(t, net.get());
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<MetricsRow> Simulator::aggregate(
    const std::vector<std::vector<TrialRecord>>& trials) const {
  const std::size_t n_s = cfg_.schemes.size();
  const std::size_t n_p = cfg_.sweep_dbm.size();
  std::vector<MetricsRow> rows;
  for (std::size_t s = 0; s < n_s; ++s) {
    for (std::size_t p = 0; p < n_p; ++p) {
      std::vector<TrialRecord> point;
      point.reserve(trials.size());
      for (const auto& t : trials) point.push_back(t.at(p * n_s + s));
      MetricsRow row;
      row.scheme = cfg_.schemes[s];
      row.p_t_dbm = cfg_.sweep_dbm[p];
      const Nmse e = nmse(point);
      row.nmse_range = e.range;
      row.nmse_angle = e.angle;
      row.mean_gain = mean_gain(point);
      row.success_rate = success_rate(point);
      row.rate_bps_hz = mean_rate(point, cfg_.n_rf, cfg_.t_symbol_s, cfg_.t_total_s);
      row.flops = scheme_flops(row.scheme);
      row.pilot_symbols = flops::pilots_with_rf_chains(scheme_pilots(row.scheme), cfg_.n_rf);
      row.trials = static_cast<int>(point.size());
      row.seed = cfg_.seed;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace nfba
