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

#include "nfba/finenet/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "nfba/errors.hpp"

namespace nfba::finenet {
namespace {

void shuffle(std::vector<std::size_t>& v, KeyedRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

std::vector<Tensor> snapshot(const FineNet& net) {
  std::vector<Tensor> out;
  out.reserve(net.params().size());
  for (const Param& p : net.params()) out.push_back(p.value);
  return out;
}

}  // namespace

Adam::Adam(FineNet& net, const AdamConfig& cfg) : net_(net), cfg_(cfg) {
  for (const Param& p : net_.params()) {
    const std::size_t n = p.trainable ? p.value.numel() : 0;
    m_.emplace_back(n, 0.0);
    v_.emplace_back(n, 0.0);
  }
}

void Adam::step(double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
  auto& params = net_.params();
  for (std::size_t k = 0; k < params.size(); ++k) {
    Param& p = params[k];
    if (!p.trainable) continue;
    for (std::size_t i = 0; i < p.value.numel(); ++i) {
      const double g = p.grad[i];
      m_[k][i] = cfg_.beta1 * m_[k][i] + (1.0 - cfg_.beta1) * g;
      v_[k][i] = cfg_.beta2 * v_[k][i] + (1.0 - cfg_.beta2) * g * g;
      const double m_hat = m_[k][i] / c1;
      const double v_hat = v_[k][i] / c2;
      p.value[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
}

Batch pack(const std::vector<TrainSample>& samples, std::span<const std::size_t> indices) {
  Batch b;
  b.size = static_cast<int>(indices.size());
  for (std::size_t i : indices) {
    const TrainSample& s = samples.at(i);
    b.inputs.insert(b.inputs.end(), s.input.begin(), s.input.end());
    b.masks.insert(b.masks.end(), s.mask.begin(), s.mask.end());
    b.targets.push_back(s.target);
  }
  return b;
}

double train_step(FineNet& net, Adam& opt, const Batch& batch, double lr, KeyedRng* dropout_rng) {
  net.forward(batch.inputs, batch.masks, batch.size, Mode::kTrain, dropout_rng);
  const double j = net.loss(batch.targets);
  if (!std::isfinite(j)) {
    throw NumericalAbort(fmt::format("training diverged: loss {} at step {}", j, opt.steps() + 1));
  }
  net.zero_grad();
  net.backward(batch.targets);
  opt.step(lr);
  return j;
}

double evaluate_loss(FineNet& net, const std::vector<TrainSample>& samples,
                     std::span<const std::size_t> indices, int batch_size) {
  if (indices.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t start = 0; start < indices.size(); start += batch_size) {
    const std::size_t n = std::min<std::size_t>(batch_size, indices.size() - start);
    const Batch b = pack(samples, indices.subspan(start, n));
    net.forward(b.inputs, b.masks, b.size, Mode::kEval);
    sum += net.loss(b.targets) * static_cast<double>(n);
  }
  return sum / static_cast<double>(indices.size());
}

std::vector<double> predict(FineNet& net, const TrainSample& sample) {
  return net.forward(sample.input, sample.mask, 1, Mode::kEval);
}

TrainReport train(FineNet& net, const std::vector<TrainSample>& samples, const TrainConfig& cfg) {
  if (samples.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.batch_size < 2) throw std::invalid_argument("train: batch size must be at least 2");

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  KeyedRng split_rng(cfg.seed, 0, StreamTag::kShuffle);
  shuffle(order, split_rng);
  const auto n_val = static_cast<std::size_t>(cfg.val_fraction * static_cast<double>(samples.size()));
  std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> tr(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  if (val.empty()) val = tr;

  Adam opt(net);
  TrainReport report;
  std::vector<Tensor> best = snapshot(net);
  int stale = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const double lr =
        0.5 * cfg.lr * (1.0 + std::cos(std::numbers::pi * epoch / cfg.max_epochs));
    KeyedRng order_rng(cfg.seed, static_cast<std::uint64_t>(epoch) + 1, StreamTag::kShuffle);
    shuffle(tr, order_rng);
    KeyedRng drop_rng(cfg.seed, static_cast<std::uint64_t>(epoch), StreamTag::kDropout);
    double sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start + 2 <= tr.size(); start += cfg.batch_size) {
      const std::size_t n = std::min<std::size_t>(cfg.batch_size, tr.size() - start);
      if (n < 2) break;
      const Batch b = pack(samples, std::span<const std::size_t>(tr).subspan(start, n));
      sum += train_step(net, opt, b, lr, &drop_rng) * static_cast<double>(n);
      seen += n;
    }
    const double train_loss = seen > 0 ? sum / static_cast<double>(seen) : 0.0;
    const double val_loss = evaluate_loss(net, samples, val);
    if (!std::isfinite(val_loss)) {
      throw NumericalAbort(fmt::format("training diverged: validation loss {} at epoch {}",
                                       val_loss, epoch + 1));
    }
    report.train_loss.push_back(train_loss);
    report.val_loss.push_back(val_loss);
    report.epochs_run = epoch + 1;
    if (cfg.verbose) {
      fmt::print(stderr, "epoch {:3d} lr {:.3e} train {:.5f} val {:.5f}\n", epoch + 1, lr,
                 train_loss, val_loss);
    }
    if (report.best_epoch < 0 || val_loss < report.best_val_loss) {
      report.best_epoch = epoch;
      report.best_val_loss = val_loss;
      best = snapshot(net);
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  for (std::size_t k = 0; k < best.size(); ++k) net.params()[k].value = std::move(best[k]);
  return report;
}

}  // namespace nfba::finenet
