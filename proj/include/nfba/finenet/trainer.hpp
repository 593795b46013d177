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
#include <span>
#include <vector>

#include "nfba/finenet/dataset.hpp"
#include "nfba/finenet/network.hpp"

namespace nfba::finenet {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction over the trainable parameters of one network.
class Adam {
 public:
  explicit Adam(FineNet& net, const AdamConfig& cfg = {});
  /// Applies one update using the gradients currently stored in the network.
  void step(double lr);
  int steps() const { return t_; }

 private:
  FineNet& net_;
  AdamConfig cfg_;
  int t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

struct TrainConfig {
  int max_epochs = 100;
  int batch_size = 64;
  double lr = 1e-3;
  int patience = 10;
  double val_fraction = 0.1;
  std::uint64_t seed = 1;
  bool verbose = false;
};

struct TrainReport {
  int epochs_run = 0;
  int best_epoch = -1;
  double best_val_loss = 0.0;
  std::vector<double> train_loss;
  std::vector<double> val_loss;
};

/// Packed batch in the layout FineNet::forward expects.
struct Batch {
  int size = 0;
  std::vector<double> inputs;
  std::vector<std::uint8_t> masks;
  std::vector<int> targets;
};

Batch pack(const std::vector<TrainSample>& samples, std::span<const std::size_t> indices);

/// Forward, backward and one Adam update on a batch; returns the batch loss.
/// Throws NumericalAbort on a non-finite loss.
double train_step(FineNet& net, Adam& opt, const Batch& batch, double lr, KeyedRng* dropout_rng);

/// Mean eval-mode loss.
double evaluate_loss(FineNet& net, const std::vector<TrainSample>& samples,
                     std::span<const std::size_t> indices, int batch_size = 256);

/// Eval-mode probabilities for one sample.
std::vector<double> predict(FineNet& net, const TrainSample& sample);

/// Mini-batch Adam with cosine-annealed learning rate and early stopping on
/// validation loss. Leaves the network at its best-validation parameters.
/// Deterministic for a fixed seed.
TrainReport train(FineNet& net, const std::vector<TrainSample>& samples, const TrainConfig& cfg);

}  // namespace nfba::finenet
