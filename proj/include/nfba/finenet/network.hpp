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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nfba/finenet/tensor.hpp"
#include "nfba/rng.hpp"

namespace nfba::finenet {

/// Architecture hyperparameters.
///
/// Each of the three convolution blocks runs a kernel-3 and a kernel-5 branch
/// at stride 2 and concatenates them, so block b emits 2 * branch_channels[b]
/// channels. Block outputs go through batch norm and a fixed-slope PReLU; the
/// two fully connected blocks use batch norm, per-channel PReLU and dropout.
struct NetConfig {
  int input_len = 49;
  std::array<int, 3> branch_channels{16, 32, 64};
  int fc_width = 128;
  double dropout = 0.5;
  double conv_prelu_slope = 0.25;
  double prelu_init = 0.25;
  double bn_eps = 1e-5;
  double bn_momentum = 0.1;

  /// U = 9 with block outputs 4, 8, 16 and a 16-wide head.
  static NetConfig miniature();
  void validate() const;
};

enum class Mode { kTrain, kEval };

/// Output length of a stride-2 block: ceil(L / 2).
constexpr int strided_length(int l) { return (l + 1) / 2; }

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;  // empty for buffers
  bool trainable = true;
};

class FineNet {
 public:
  explicit FineNet(const NetConfig& cfg = {});

  const NetConfig& config() const { return cfg_; }

  /// Uniform(+-1/sqrt(fan_in)) weights and biases, unit batch-norm scale,
  /// zero shift, PReLU slopes at prelu_init.
  void init(std::uint64_t seed);

  std::vector<Param>& params() { return params_; }
  const std::vector<Param>& params() const { return params_; }
  Param& param(const std::string& name);
  const Param& param(const std::string& name) const;
  std::size_t trainable_count() const;

  /// Lengths after each convolution block.
  std::array<int, 3> feature_lengths() const { return {l1_, l2_, l3_}; }

  /// Probabilities for a batch. `inputs` and `masks` are batch x U row-major.
  /// Train mode uses batch statistics, updates running statistics and applies
  /// dropout from `dropout_rng` (no dropout when null).
  const std::vector<double>& forward(std::span<const double> inputs,
                                     std::span<const std::uint8_t> masks, int batch, Mode mode,
                                     KeyedRng* dropout_rng = nullptr);

  /// Mean of -log10 p[target] over the last forward batch.
  double loss(std::span<const int> targets) const;

  /// Accumulates parameter gradients of loss(targets) for the last forward.
  void backward(std::span<const int> targets);
  void zero_grad();

  /// GAP features of the last forward, batch x channels.
  const std::vector<double>& pooled_features() const { return gap_; }

 private:
  struct ConvBlock {
    int c_in = 0, c_branch = 0, l_in = 0, l_out = 0;
    std::size_t w3 = 0, b3 = 0, w5 = 0, b5 = 0, gamma = 0, beta = 0, mean = 0, var = 0, slope = 0;
    std::vector<double> input, xhat, pre_act, output, inv_std;
  };
  struct FcBlock {
    int in = 0, out = 0;
    std::size_t w = 0, b = 0, gamma = 0, beta = 0, mean = 0, var = 0, slope = 0;
    std::vector<double> input, xhat, pre_act, output, keep, inv_std;
  };

  std::size_t add_param(const std::string& name, std::vector<std::size_t> shape, bool trainable);
  void block_forward(ConvBlock& blk, const std::vector<double>& in, Mode mode);
  void block_backward(ConvBlock& blk, std::vector<double>& dout, std::vector<double>* din);
  void fc_forward(FcBlock& fc, const std::vector<double>& in, Mode mode, KeyedRng* rng);
  void fc_backward(FcBlock& fc, std::vector<double>& dout, std::vector<double>& din);
  double* value(std::size_t k) { return params_[k].value.data.data(); }
  double* grad(std::size_t k) { return params_[k].grad.data.data(); }

  NetConfig cfg_;
  int l1_, l2_, l3_;
  std::vector<Param> params_;
  std::array<ConvBlock, 3> blocks_;
  std::size_t att_w_ = 0, att_b_ = 0;
  std::array<FcBlock, 2> fcs_;
  std::size_t out_w_ = 0, out_b_ = 0;

  int batch_ = 0;
  Mode mode_ = Mode::kEval;
  std::vector<std::uint8_t> mask_;
  std::vector<double> att_in_, att_pool_, att_sig_, att_out_, gap_, logits_, probs_;
  std::vector<int> att_argmax_;
};

/// Cross-entropy in base 10 for one probability vector.
double log10_loss(std::span<const double> probs, int target);

}  // namespace nfba::finenet
