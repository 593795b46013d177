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

#include "nfba/finenet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace nfba::finenet {
namespace {

constexpr int kAttentionKernel = 7;

// out[b][c_off + o][j] = bias[o] + sum_c sum_t w[o][c][t] in[b][c][stride j - pad + t],
// with zeros outside the input.
void conv_forward(const double* in, int batch, int c_in, int l_in, const double* w,
                  const double* bias, int c_out, int k, int stride, int pad, double* out,
                  int c_total, int c_off, int l_out) {
  for (int b = 0; b < batch; ++b) {
    for (int o = 0; o < c_out; ++o) {
      double* dst = out + (static_cast<std::size_t>(b) * c_total + c_off + o) * l_out;
      for (int j = 0; j < l_out; ++j) dst[j] = bias[o];
      for (int c = 0; c < c_in; ++c) {
        const double* row = in + (static_cast<std::size_t>(b) * c_in + c) * l_in;
        const double* wk = w + (static_cast<std::size_t>(o) * c_in + c) * k;
        for (int j = 0; j < l_out; ++j) {
          const int base = stride * j - pad;
          double acc = 0.0;
          for (int t = 0; t < k; ++t) {
            const int p = base + t;
            if (p >= 0 && p < l_in) acc += wk[t] * row[p];
          }
          dst[j] += acc;
        }
      }
    }
  }
}

void conv_backward(const double* dout, int batch, int c_in, int l_in, const double* in,
                   const double* w, double* dw, double* db, double* din, int c_out, int k,
                   int stride, int pad, int c_total, int c_off, int l_out) {
  for (int b = 0; b < batch; ++b) {
    for (int o = 0; o < c_out; ++o) {
      const double* g = dout + (static_cast<std::size_t>(b) * c_total + c_off + o) * l_out;
      for (int j = 0; j < l_out; ++j) db[o] += g[j];
      for (int c = 0; c < c_in; ++c) {
        const std::size_t row_off = (static_cast<std::size_t>(b) * c_in + c) * l_in;
        const double* row = in + row_off;
        const std::size_t w_off = (static_cast<std::size_t>(o) * c_in + c) * k;
        for (int j = 0; j < l_out; ++j) {
          const int base = stride * j - pad;
          for (int t = 0; t < k; ++t) {
            const int p = base + t;
            if (p < 0 || p >= l_in) continue;
            dw[w_off + t] += g[j] * row[p];
            if (din != nullptr) din[row_off + p] += g[j] * w[w_off + t];
          }
        }
      }
    }
  }
}

// Batch norm over (batch, length) per channel of a [batch][ch][len] array.
void bn_forward(const double* z, int batch, int ch, int len, const double* gamma,
                const double* beta, double* run_mean, double* run_var, double eps,
                double momentum, Mode mode, double* xhat, double* inv_std, double* out) {
  const double m = static_cast<double>(batch) * len;
  for (int c = 0; c < ch; ++c) {
    double mean;
    double var;
    if (mode == Mode::kTrain) {
      double sum = 0.0;
      for (int b = 0; b < batch; ++b) {
        const double* row = z + (static_cast<std::size_t>(b) * ch + c) * len;
        for (int l = 0; l < len; ++l) sum += row[l];
      }
      mean = sum / m;
      double sq = 0.0;
      for (int b = 0; b < batch; ++b) {
        const double* row = z + (static_cast<std::size_t>(b) * ch + c) * len;
        for (int l = 0; l < len; ++l) sq += (row[l] - mean) * (row[l] - mean);
      }
      var = sq / m;
      const double unbiased = m > 1.0 ? sq / (m - 1.0) : var;
      run_mean[c] = (1.0 - momentum) * run_mean[c] + momentum * mean;
      run_var[c] = (1.0 - momentum) * run_var[c] + momentum * unbiased;
    } else {
      mean = run_mean[c];
      var = run_var[c];
    }
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[c] = is;
    for (int b = 0; b < batch; ++b) {
      const std::size_t off = (static_cast<std::size_t>(b) * ch + c) * len;
      for (int l = 0; l < len; ++l) {
        const double xh = (z[off + l] - mean) * is;
        xhat[off + l] = xh;
        out[off + l] = gamma[c] * xh + beta[c];
      }
    }
  }
}

// Overwrites dy with the gradient with respect to the normalized input.
void bn_backward(double* dy, const double* xhat, const double* inv_std, int batch, int ch,
                 int len, const double* gamma, double* dgamma, double* dbeta, Mode mode) {
  const double m = static_cast<double>(batch) * len;
  for (int c = 0; c < ch; ++c) {
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (int b = 0; b < batch; ++b) {
      const std::size_t off = (static_cast<std::size_t>(b) * ch + c) * len;
      for (int l = 0; l < len; ++l) {
        sum_dy += dy[off + l];
        sum_dy_xhat += dy[off + l] * xhat[off + l];
      }
    }
    dgamma[c] += sum_dy_xhat;
    dbeta[c] += sum_dy;
    const double scale = gamma[c] * inv_std[c];
    for (int b = 0; b < batch; ++b) {
      const std::size_t off = (static_cast<std::size_t>(b) * ch + c) * len;
      for (int l = 0; l < len; ++l) {
        if (mode == Mode::kTrain) {
          dy[off + l] = scale / m * (m * dy[off + l] - sum_dy - xhat[off + l] * sum_dy_xhat);
        } else {
          dy[off + l] = scale * dy[off + l];
        }
      }
    }
  }
}

}  // namespace

NetConfig NetConfig::miniature() {
  NetConfig c;
  c.input_len = 9;
  c.branch_channels = {2, 4, 8};
  c.fc_width = 16;
  return c;
}

void NetConfig::validate() const {
  if (input_len < 1) throw std::invalid_argument("NetConfig: input length must be positive");
  for (int c : branch_channels) {
    if (c < 1) throw std::invalid_argument("NetConfig: channel counts must be positive");
  }
  if (fc_width < 1) throw std::invalid_argument("NetConfig: fc width must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("NetConfig: dropout must lie in [0, 1)");
  }
}

FineNet::FineNet(const NetConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  l1_ = strided_length(cfg_.input_len);
  l2_ = strided_length(l1_);
  l3_ = strided_length(l2_);
  const std::array<int, 3> lens_in{cfg_.input_len, l1_, l2_};
  int c_in = 1;
  for (int b = 0; b < 3; ++b) {
    ConvBlock& blk = blocks_[b];
    const int c = cfg_.branch_channels[b];
    const auto cs = static_cast<std::size_t>(c);
    const auto ci = static_cast<std::size_t>(c_in);
    const std::string p = fmt::format("block{}.", b + 1);
    blk.c_in = c_in;
    blk.c_branch = c;
    blk.l_in = lens_in[b];
    blk.l_out = strided_length(blk.l_in);
    blk.w3 = add_param(p + "conv3.weight", {cs, ci, 3}, true);
    blk.b3 = add_param(p + "conv3.bias", {cs}, true);
    blk.w5 = add_param(p + "conv5.weight", {cs, ci, 5}, true);
    blk.b5 = add_param(p + "conv5.bias", {cs}, true);
    blk.gamma = add_param(p + "bn.weight", {2 * cs}, true);
    blk.beta = add_param(p + "bn.bias", {2 * cs}, true);
    blk.mean = add_param(p + "bn.running_mean", {2 * cs}, false);
    blk.var = add_param(p + "bn.running_var", {2 * cs}, false);
    blk.slope = add_param(p + "prelu.slope", {1}, false);
    c_in = 2 * c;
  }
  att_w_ = add_param("attention.conv.weight", {1, 2, kAttentionKernel}, true);
  att_b_ = add_param("attention.conv.bias", {1}, true);
  int in = c_in;
  for (int k = 0; k < 2; ++k) {
    FcBlock& fc = fcs_[k];
    const std::string p = fmt::format("fc{}.", k + 1);
    const auto w = static_cast<std::size_t>(cfg_.fc_width);
    fc.in = in;
    fc.out = cfg_.fc_width;
    fc.w = add_param(p + "weight", {w, static_cast<std::size_t>(in)}, true);
    fc.b = add_param(p + "bias", {w}, true);
    fc.gamma = add_param(p + "bn.weight", {w}, true);
    fc.beta = add_param(p + "bn.bias", {w}, true);
    fc.mean = add_param(p + "bn.running_mean", {w}, false);
    fc.var = add_param(p + "bn.running_var", {w}, false);
    fc.slope = add_param(p + "prelu.weight", {w}, true);
    in = cfg_.fc_width;
  }
  const auto u = static_cast<std::size_t>(cfg_.input_len);
  out_w_ = add_param("out.weight", {u, static_cast<std::size_t>(in)}, true);
  out_b_ = add_param("out.bias", {u}, true);
  init(0);
}

std::size_t FineNet::add_param(const std::string& name, std::vector<std::size_t> shape,
                               bool trainable) {
  Param p;
  p.name = name;
  p.value = Tensor(shape);
  if (trainable) p.grad = Tensor(shape);
  p.trainable = trainable;
  params_.push_back(std::move(p));
  return params_.size() - 1;
}

Param& FineNet::param(const std::string& name) {
  for (Param& p : params_) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("FineNet: no parameter named " + name);
}

const Param& FineNet::param(const std::string& name) const {
  return const_cast<FineNet*>(this)->param(name);
}

std::size_t FineNet::trainable_count() const {
  std::size_t n = 0;
  for (const Param& p : params_) {
    if (p.trainable) n += p.value.numel();
  }
  return n;
}

void FineNet::init(std::uint64_t seed) {
  KeyedRng rng(seed, 0, StreamTag::kInit);
  auto uniform_pair = [&](std::size_t w, std::size_t b) {
    const Tensor& t = params_[w].value;
    const double fan_in = static_cast<double>(t.numel() / t.shape[0]);
    const double bound = 1.0 / std::sqrt(fan_in);
    for (double& v : params_[w].value.data) v = rng.uniform(-bound, bound);
    for (double& v : params_[b].value.data) v = rng.uniform(-bound, bound);
  };
  for (ConvBlock& blk : blocks_) {
    uniform_pair(blk.w3, blk.b3);
    uniform_pair(blk.w5, blk.b5);
    params_[blk.gamma].value.fill(1.0);
    params_[blk.beta].value.fill(0.0);
    params_[blk.mean].value.fill(0.0);
    params_[blk.var].value.fill(1.0);
    params_[blk.slope].value.fill(cfg_.conv_prelu_slope);
  }
  uniform_pair(att_w_, att_b_);
  for (FcBlock& fc : fcs_) {
    uniform_pair(fc.w, fc.b);
    params_[fc.gamma].value.fill(1.0);
    params_[fc.beta].value.fill(0.0);
    params_[fc.mean].value.fill(0.0);
    params_[fc.var].value.fill(1.0);
    params_[fc.slope].value.fill(cfg_.prelu_init);
  }
  uniform_pair(out_w_, out_b_);
  zero_grad();
}

void FineNet::zero_grad() {
  for (Param& p : params_) {
    if (p.trainable) p.grad.fill(0.0);
  }
}

void FineNet::block_forward(ConvBlock& blk, const std::vector<double>& in, Mode mode) {
  const int ch = 2 * blk.c_branch;
  const std::size_t n = static_cast<std::size_t>(batch_) * ch * blk.l_out;
  blk.input = in;
  std::vector<double> z(n);
  conv_forward(in.data(), batch_, blk.c_in, blk.l_in, value(blk.w3), value(blk.b3), blk.c_branch,
               3, 2, 1, z.data(), ch, 0, blk.l_out);
  conv_forward(in.data(), batch_, blk.c_in, blk.l_in, value(blk.w5), value(blk.b5), blk.c_branch,
               5, 2, 2, z.data(), ch, blk.c_branch, blk.l_out);
  blk.xhat.resize(n);
  blk.pre_act.resize(n);
  blk.inv_std.resize(ch);
  bn_forward(z.data(), batch_, ch, blk.l_out, value(blk.gamma), value(blk.beta), value(blk.mean),
             value(blk.var), cfg_.bn_eps, cfg_.bn_momentum, mode, blk.xhat.data(),
             blk.inv_std.data(), blk.pre_act.data());
  const double a = params_[blk.slope].value[0];
  blk.output.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = blk.pre_act[i];
    blk.output[i] = v > 0.0 ? v : a * v;
  }
}

void FineNet::block_backward(ConvBlock& blk, std::vector<double>& dout, std::vector<double>* din) {
  const int ch = 2 * blk.c_branch;
  const double a = params_[blk.slope].value[0];
  for (std::size_t i = 0; i < dout.size(); ++i) {
    if (!(blk.pre_act[i] > 0.0)) dout[i] *= a;
  }
  bn_backward(dout.data(), blk.xhat.data(), blk.inv_std.data(), batch_, ch, blk.l_out,
              value(blk.gamma), grad(blk.gamma), grad(blk.beta), mode_);
  double* dx = nullptr;
  if (din != nullptr) {
    din->assign(static_cast<std::size_t>(batch_) * blk.c_in * blk.l_in, 0.0);
    dx = din->data();
  }
  conv_backward(dout.data(), batch_, blk.c_in, blk.l_in, blk.input.data(), value(blk.w3),
                grad(blk.w3), grad(blk.b3), dx, blk.c_branch, 3, 2, 1, ch, 0, blk.l_out);
  conv_backward(dout.data(), batch_, blk.c_in, blk.l_in, blk.input.data(), value(blk.w5),
                grad(blk.w5), grad(blk.b5), dx, blk.c_branch, 5, 2, 2, ch, blk.c_branch,
                blk.l_out);
}

void FineNet::fc_forward(FcBlock& fc, const std::vector<double>& in, Mode mode, KeyedRng* rng) {
  const std::size_t n = static_cast<std::size_t>(batch_) * fc.out;
  fc.input = in;
  std::vector<double> z(n);
  const double* w = value(fc.w);
  const double* bias = value(fc.b);
  for (int b = 0; b < batch_; ++b) {
    const double* x = in.data() + static_cast<std::size_t>(b) * fc.in;
    for (int o = 0; o < fc.out; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * fc.in;
      double acc = bias[o];
      for (int i = 0; i < fc.in; ++i) acc += row[i] * x[i];
      z[static_cast<std::size_t>(b) * fc.out + o] = acc;
    }
  }
  fc.xhat.resize(n);
  fc.pre_act.resize(n);
  fc.inv_std.resize(fc.out);
  bn_forward(z.data(), batch_, fc.out, 1, value(fc.gamma), value(fc.beta), value(fc.mean),
             value(fc.var), cfg_.bn_eps, cfg_.bn_momentum, mode, fc.xhat.data(),
             fc.inv_std.data(), fc.pre_act.data());
  const double* slope = value(fc.slope);
  const bool drop = mode == Mode::kTrain && rng != nullptr && cfg_.dropout > 0.0;
  const double keep_scale = 1.0 / (1.0 - cfg_.dropout);
  fc.keep.assign(n, 1.0);
  fc.output.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = fc.pre_act[i];
    const double act = v > 0.0 ? v : slope[i % fc.out] * v;
    if (drop) fc.keep[i] = rng->uniform() < cfg_.dropout ? 0.0 : keep_scale;
    fc.output[i] = act * fc.keep[i];
  }
}

void FineNet::fc_backward(FcBlock& fc, std::vector<double>& dout, std::vector<double>& din) {
  const double* slope = value(fc.slope);
  double* dslope = grad(fc.slope);
  for (std::size_t i = 0; i < dout.size(); ++i) {
    const double g = dout[i] * fc.keep[i];
    const double v = fc.pre_act[i];
    if (v > 0.0) {
      dout[i] = g;
    } else {
      dslope[i % fc.out] += v * g;
      dout[i] = slope[i % fc.out] * g;
    }
  }
  bn_backward(dout.data(), fc.xhat.data(), fc.inv_std.data(), batch_, fc.out, 1, value(fc.gamma),
              grad(fc.gamma), grad(fc.beta), mode_);
  const double* w = value(fc.w);
  double* dw = grad(fc.w);
  double* db = grad(fc.b);
  din.assign(static_cast<std::size_t>(batch_) * fc.in, 0.0);
  for (int b = 0; b < batch_; ++b) {
    const double* x = fc.input.data() + static_cast<std::size_t>(b) * fc.in;
    double* dx = din.data() + static_cast<std::size_t>(b) * fc.in;
    for (int o = 0; o < fc.out; ++o) {
      const double g = dout[static_cast<std::size_t>(b) * fc.out + o];
      db[o] += g;
      const double* row = w + static_cast<std::size_t>(o) * fc.in;
      double* drow = dw + static_cast<std::size_t>(o) * fc.in;
      for (int i = 0; i < fc.in; ++i) {
        drow[i] += g * x[i];
        dx[i] += g * row[i];
      }
    }
  }
}

const std::vector<double>& FineNet::forward(std::span<const double> inputs,
                                            std::span<const std::uint8_t> masks, int batch,
                                            Mode mode, KeyedRng* dropout_rng) {
  const int u = cfg_.input_len;
  const auto total = static_cast<std::size_t>(batch) * u;
  if (batch < 1 || inputs.size() != total || masks.size() != total) {
    throw std::invalid_argument(fmt::format("FineNet::forward: expected {} x {} inputs and masks",
                                            batch, u));
  }
  batch_ = batch;
  mode_ = mode;
  mask_.assign(masks.begin(), masks.end());

  // Masked input scaled by its largest valid entry.
  std::vector<double> x0(total, 0.0);
  for (int b = 0; b < batch; ++b) {
    const std::size_t off = static_cast<std::size_t>(b) * u;
    double peak = 0.0;
    for (int l = 0; l < u; ++l) {
      if (masks[off + l]) peak = std::max(peak, inputs[off + l]);
    }
    const double scale = peak > 0.0 ? 1.0 / peak : 0.0;
    for (int l = 0; l < u; ++l) {
      if (masks[off + l]) x0[off + l] = inputs[off + l] * scale;
    }
  }

  block_forward(blocks_[0], x0, mode);
  block_forward(blocks_[1], blocks_[0].output, mode);
  block_forward(blocks_[2], blocks_[1].output, mode);

  // Spatial attention from channel-wise mean and max.
  const int ch = 2 * blocks_[2].c_branch;
  const int len = l3_;
  att_in_ = blocks_[2].output;
  att_pool_.assign(static_cast<std::size_t>(batch) * 2 * len, 0.0);
  att_argmax_.assign(static_cast<std::size_t>(batch) * len, 0);
  for (int b = 0; b < batch; ++b) {
    for (int l = 0; l < len; ++l) {
      double sum = 0.0;
      double best = -std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int c = 0; c < ch; ++c) {
        const double v = att_in_[(static_cast<std::size_t>(b) * ch + c) * len + l];
        sum += v;
        if (v > best) {
          best = v;
          arg = c;
        }
      }
      att_pool_[(static_cast<std::size_t>(b) * 2) * len + l] = sum / ch;
      att_pool_[(static_cast<std::size_t>(b) * 2 + 1) * len + l] = best;
      att_argmax_[static_cast<std::size_t>(b) * len + l] = arg;
    }
  }
  att_sig_.assign(static_cast<std::size_t>(batch) * len, 0.0);
  conv_forward(att_pool_.data(), batch, 2, len, value(att_w_), value(att_b_), 1,
               kAttentionKernel, 1, kAttentionKernel / 2, att_sig_.data(), 1, 0, len);
  for (double& v : att_sig_) v = 1.0 / (1.0 + std::exp(-v));
  att_out_.resize(att_in_.size());
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < ch; ++c) {
      for (int l = 0; l < len; ++l) {
        const std::size_t i = (static_cast<std::size_t>(b) * ch + c) * len + l;
        att_out_[i] = att_in_[i] * att_sig_[static_cast<std::size_t>(b) * len + l];
      }
    }
  }

  gap_.assign(static_cast<std::size_t>(batch) * ch, 0.0);
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < ch; ++c) {
      double sum = 0.0;
      for (int l = 0; l < len; ++l) sum += att_out_[(static_cast<std::size_t>(b) * ch + c) * len + l];
      gap_[static_cast<std::size_t>(b) * ch + c] = sum / len;
    }
  }

  fc_forward(fcs_[0], gap_, mode, dropout_rng);
  fc_forward(fcs_[1], fcs_[0].output, mode, dropout_rng);

  const int f = fcs_[1].out;
  const double* w = value(out_w_);
  const double* bias = value(out_b_);
  logits_.assign(total, 0.0);
  probs_.assign(total, 0.0);
  for (int b = 0; b < batch; ++b) {
    const double* h = fcs_[1].output.data() + static_cast<std::size_t>(b) * f;
    const std::size_t off = static_cast<std::size_t>(b) * u;
    double peak = -std::numeric_limits<double>::infinity();
    int valid = 0;
    for (int j = 0; j < u; ++j) {
      double acc = bias[j];
      const double* row = w + static_cast<std::size_t>(j) * f;
      for (int i = 0; i < f; ++i) acc += row[i] * h[i];
      logits_[off + j] = masks[off + j] ? acc : -std::numeric_limits<double>::infinity();
      if (masks[off + j]) {
        ++valid;
        peak = std::isnan(acc) || std::isnan(peak) ? std::numeric_limits<double>::quiet_NaN()
                                                  : std::max(peak, acc);
      }
    }
    if (valid == 0) {
      throw std::invalid_argument("FineNet::forward: sample has no valid slot");
    }
    double norm = 0.0;
    for (int j = 0; j < u; ++j) {
      if (masks[off + j]) {
        probs_[off + j] = std::exp(logits_[off + j] - peak);
        norm += probs_[off + j];
      }
    }
    for (int j = 0; j < u; ++j) probs_[off + j] /= norm;
  }
  return probs_;
}

double log10_loss(std::span<const double> probs, int target) {
  if (target < 0 || static_cast<std::size_t>(target) >= probs.size()) {
    throw std::out_of_range("log10_loss: target outside the probability vector");
  }
  // Zero probability gives +inf and NaN stays NaN; callers decide whether to abort.
  return -std::log10(probs[target]);
}

double FineNet::loss(std::span<const int> targets) const {
  const int u = cfg_.input_len;
  if (targets.size() != static_cast<std::size_t>(batch_)) {
    throw std::invalid_argument("FineNet::loss: one target per sample required");
  }
  double sum = 0.0;
  for (int b = 0; b < batch_; ++b) {
    if (!mask_[static_cast<std::size_t>(b) * u + targets[b]]) {
      throw std::invalid_argument("FineNet::loss: target slot is masked");
    }
    sum += log10_loss(std::span<const double>(probs_).subspan(static_cast<std::size_t>(b) * u, u),
                      targets[b]);
  }
  return sum / batch_;
}

void FineNet::backward(std::span<const int> targets) {
  const int u = cfg_.input_len;
  if (targets.size() != static_cast<std::size_t>(batch_)) {
    throw std::invalid_argument("FineNet::backward: one target per sample required");
  }
  const double scale = 1.0 / (batch_ * std::numbers::ln10);

  // Output layer.
  const int f = fcs_[1].out;
  std::vector<double> dh(static_cast<std::size_t>(batch_) * f, 0.0);
  const double* w = value(out_w_);
  double* dw = grad(out_w_);
  double* db = grad(out_b_);
  for (int b = 0; b < batch_; ++b) {
    const std::size_t off = static_cast<std::size_t>(b) * u;
    const double* h = fcs_[1].output.data() + static_cast<std::size_t>(b) * f;
    double* dhb = dh.data() + static_cast<std::size_t>(b) * f;
    for (int j = 0; j < u; ++j) {
      if (!mask_[off + j]) continue;
      const double g = (probs_[off + j] - (j == targets[b] ? 1.0 : 0.0)) * scale;
      db[j] += g;
      const double* row = w + static_cast<std::size_t>(j) * f;
      double* drow = dw + static_cast<std::size_t>(j) * f;
      for (int i = 0; i < f; ++i) {
        drow[i] += g * h[i];
        dhb[i] += g * row[i];
      }
    }
  }

  std::vector<double> dfc1;
  fc_backward(fcs_[1], dh, dfc1);
  std::vector<double> dgap;
  fc_backward(fcs_[0], dfc1, dgap);

  // Pooling and attention.
  const int ch = 2 * blocks_[2].c_branch;
  const int len = l3_;
  std::vector<double> dx(att_in_.size(), 0.0);
  std::vector<double> dt(static_cast<std::size_t>(batch_) * len, 0.0);
  for (int b = 0; b < batch_; ++b) {
    for (int c = 0; c < ch; ++c) {
      const double g = dgap[static_cast<std::size_t>(b) * ch + c] / len;
      for (int l = 0; l < len; ++l) {
        const std::size_t i = (static_cast<std::size_t>(b) * ch + c) * len + l;
        const std::size_t s = static_cast<std::size_t>(b) * len + l;
        dx[i] = g * att_sig_[s];
        dt[s] += g * att_in_[i];
      }
    }
  }
  for (std::size_t s = 0; s < dt.size(); ++s) dt[s] *= att_sig_[s] * (1.0 - att_sig_[s]);
  std::vector<double> dpool(att_pool_.size(), 0.0);
  conv_backward(dt.data(), batch_, 2, len, att_pool_.data(), value(att_w_), grad(att_w_),
                grad(att_b_), dpool.data(), 1, kAttentionKernel, 1, kAttentionKernel / 2, 1, 0,
                len);
  for (int b = 0; b < batch_; ++b) {
    for (int l = 0; l < len; ++l) {
      const double davg = dpool[(static_cast<std::size_t>(b) * 2) * len + l] / ch;
      const double dmax = dpool[(static_cast<std::size_t>(b) * 2 + 1) * len + l];
      for (int c = 0; c < ch; ++c) dx[(static_cast<std::size_t>(b) * ch + c) * len + l] += davg;
      const int arg = att_argmax_[static_cast<std::size_t>(b) * len + l];
      dx[(static_cast<std::size_t>(b) * ch + arg) * len + l] += dmax;
    }
  }

  std::vector<double> d2;
  std::vector<double> d1;
  block_backward(blocks_[2], dx, &d2);
  block_backward(blocks_[1], d2, &d1);
  block_backward(blocks_[0], d1, nullptr);
}

}  // namespace nfba::finenet
