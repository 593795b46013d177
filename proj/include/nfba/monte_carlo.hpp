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
#include <memory>
#include <vector>

#include "nfba/baselines.hpp"
#include "nfba/channel.hpp"
#include "nfba/finenet/dataset.hpp"
#include "nfba/finenet/network.hpp"
#include "nfba/finenet/trainer.hpp"
#include "nfba/metrics.hpp"
#include "nfba/sim_config.hpp"

namespace nfba {

/// `requested` workers, or the hardware count when it is not positive, capped
/// by NFA_THREADS when that is set and positive.
int worker_count(int requested = 0);

/// Runs every configured scheme at every sweep power on independent channel
/// draws. Trial t uses generator streams keyed by (seed, t), so records do not
/// depend on the worker count.
/// Dataset and optimizer settings derived from a simulation config. Training
/// powers span the configured sweep.
finenet::DatasetSpec dataset_spec(const SimConfig& cfg);
finenet::TrainConfig train_config(const SimConfig& cfg);

struct TrainedNetwork {
  std::shared_ptr<finenet::FineNet> net;
  finenet::TrainReport report;
  std::size_t samples = 0;
  double discard_rate = 0.0;
};

/// Generates the dataset and trains a network with input length U.
TrainedNetwork train_fine_network(const SimConfig& cfg, bool verbose = false);

class Simulator {
 public:
  /// `net` is required when the `proposed` scheme is configured.
  Simulator(const SimConfig& cfg, std::shared_ptr<const finenet::FineNet> net = nullptr);

  const SimConfig& config() const { return cfg_; }

  /// Records for trial t, ordered power-major then by configured scheme.
  std::vector<TrialRecord> run_trial(std::uint64_t trial) const;

  /// Same, reusing a caller-owned network copy for the fine stage.
  std::vector<TrialRecord> run_trial(std::uint64_t trial, finenet::FineNet* net) const;

  /// All trials on `threads` workers (0 = worker_count()).
  std::vector<std::vector<TrialRecord>> run_all(int threads = 0) const;

  /// Aggregated rows in (scheme, power) order.
  std::vector<MetricsRow> aggregate(const std::vector<std::vector<TrialRecord>>& trials) const;

  std::vector<MetricsRow> run(int threads = 0) const { return aggregate(run_all(threads)); }

  /// Reported complexity and single-chain pilot count of a scheme.
  std::int64_t scheme_flops(const std::string& scheme) const;
  int scheme_pilots(const std::string& scheme) const;

  /// Beam from the coarse stage alone: steering vector at the window center
  /// angle and the estimated range.
  BeamDecision proposed_coarse(const ComplexVector& y, double p_t_mw) const;
  /// Coarse stage followed by the fine network's refined angle.
  BeamDecision proposed(const ComplexVector& y, double p_t_mw, finenet::FineNet& net) const;

 private:
  SimConfig cfg_;
  DftCodebook dft_;
  PolarCodebook polar_;
  AswjeEstimator aswje_;
  std::shared_ptr<const finenet::FineNet> net_;
  int input_len_;
};

}  // namespace nfba
