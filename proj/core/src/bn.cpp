// Copyright 2026 The DUA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dua/bn.hpp"

#include <cmath>
#include <string>

#include "dua/error.hpp"

namespace dua::bn {
namespace {

void check_channels(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": per-channel array of length " +
                         std::to_string(got) + " for channel axis " +
                         std::to_string(want));
  }
}

}  // namespace

BatchNormState BatchNormState::fresh(std::size_t channels) {
  BatchNormState s;
  s.running_mean.assign(channels, 0.0);
  s.running_var.assign(channels, 1.0);
  s.gamma.assign(channels, 1.0);
  s.beta.assign(channels, 0.0);
  return s;
}

void BatchNormState::validate() const {
  const std::size_t c = channels();
  check_channels(beta.size(), c, "BatchNormState beta");
  check_channels(running_mean.size(), c, "BatchNormState running_mean");
  check_channels(running_var.size(), c, "BatchNormState running_var");
  if (!(eps > 0.0)) throw ParameterError("BatchNormState: eps must be > 0");
  if (!(train_momentum > 0.0 && train_momentum <= 1.0)) {
    throw ParameterError("BatchNormState: train_momentum must be in (0, 1]");
  }
  for (std::size_t i = 0; i < c; ++i) {
    if (!(running_var[i] >= 0.0)) {
      throw NumericError("BatchNormState: running_var[" + std::to_string(i) +
                         "] is negative or NaN");
    }
  }
}

ChannelStats batch_stats(const Tensor& x) {
  const Shape& s = x.shape();
  const std::size_t count = s.n * s.plane();
  if (count == 0 || s.c == 0) {
    throw DimensionError("batch_stats: empty reduction over N, H, W axes of " +
                         to_string(s));
  }
  // Single sweep of shifted sums; the shift (first element of each channel)
  // keeps the cancellation in s2 - s1^2/count small.
  std::vector<double> shift(s.c), s1(s.c, 0.0), s2(s.c, 0.0);
  for (std::size_t c = 0; c < s.c; ++c) shift[c] = x[c * s.plane()];
  const double* p = x.data().data();
  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t c = 0; c < s.c; ++c) {
      const double k = shift[c];
      double a = s1[c], b = s2[c];
      for (std::size_t i = 0; i < s.plane(); ++i) {
        const double d = p[i] - k;
        a += d;
        b += d * d;
      }
      s1[c] = a;
      s2[c] = b;
      p += s.plane();
    }
  }
  ChannelStats out;
  out.mean.resize(s.c);
  out.var.resize(s.c);
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t c = 0; c < s.c; ++c) {
    const double m1 = s1[c] * inv;
    out.mean[c] = shift[c] + m1;
    const double v = s2[c] * inv - m1 * m1;
    out.var[c] = v > 0.0 ? v : 0.0;
  }
  return out;
}

void bn_normalize_inplace(Tensor& x, std::span<const double> mean,
                          std::span<const double> var, const BatchNormState& state) {
  const Shape& s = x.shape();
  check_channels(mean.size(), s.c, "bn_normalize mean");
  check_channels(var.size(), s.c, "bn_normalize var");
  check_channels(state.gamma.size(), s.c, "bn_normalize gamma");
  check_channels(state.beta.size(), s.c, "bn_normalize beta");
  std::vector<double> scale(s.c);
  for (std::size_t c = 0; c < s.c; ++c) {
    if (!(var[c] >= 0.0)) {
      throw NumericError("bn_normalize: negative variance in channel " +
                         std::to_string(c));
    }
    const double sd = std::sqrt(var[c] + state.eps);
    if (!(sd > 0.0)) {
      throw NumericError("bn_normalize: zero variance with eps=0 in channel " +
                         std::to_string(c));
    }
    scale[c] = state.gamma[c] / sd;
  }
  double* o = x.data().data();
  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t c = 0; c < s.c; ++c) {
      const double m = mean[c], k = scale[c], b = state.beta[c];
      for (std::size_t i = 0; i < s.plane(); ++i) o[i] = (o[i] - m) * k + b;
      o += s.plane();
    }
  }
}

Tensor bn_normalize(const Tensor& x, std::span<const double> mean,
                    std::span<const double> var, const BatchNormState& state) {
  Tensor out = x;
  bn_normalize_inplace(out, mean, var, state);
  return out;
}

std::vector<double> ema_update(std::span<const double> prev,
                               std::span<const double> batch, double w) {
  if (!(w > 0.0 && w <= 1.0)) {
    throw ParameterError("ema_update: weight " + std::to_string(w) +
                         " outside (0, 1]");
  }
  check_channels(batch.size(), prev.size(), "ema_update");
  std::vector<double> out(prev.size());
  for (std::size_t i = 0; i < prev.size(); ++i) {
    out[i] = (1.0 - w) * prev[i] + w * batch[i];
  }
  return out;
}

Tensor bn_forward_train(const Tensor& x, BatchNormState& state, double rho) {
  ChannelStats st = batch_stats(x);
  Tensor out = bn_normalize(x, st.mean, st.var, state);
  state.running_mean = ema_update(state.running_mean, st.mean, rho);
  state.running_var = ema_update(state.running_var, st.var, rho);
  return out;
}

Tensor bn_forward_eval(const Tensor& x, const BatchNormState& state) {
  return bn_normalize(x, state.running_mean, state.running_var, state);
}

Tensor bn_forward_adapt(const Tensor& x, BatchNormState& state, double w,
                        AdaptNormalization norm, ChannelStats* incoming) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw ParameterError("bn_forward_adapt: weight " + std::to_string(w) +
                         " outside [0, 1]");
  }
  ChannelStats st = batch_stats(x);
  Tensor out;
  if (norm == AdaptNormalization::pre_update) out = bn_forward_eval(x, state);
  if (w > 0.0) {
    // Mean first, then variance, both with the same weight.
    state.running_mean = ema_update(state.running_mean, st.mean, w);
    state.running_var = ema_update(state.running_var, st.var, w);
  }
  if (norm == AdaptNormalization::post_update) out = bn_forward_eval(x, state);
  if (incoming != nullptr) *incoming = std::move(st);
  return out;
}

nn::LayerGrad bn_backward_train(const Tensor& x, const BatchNormState& state,
                                const Tensor& out_grad) {
  const Shape& s = x.shape();
  if (out_grad.shape() != s) {
    throw DimensionError("bn_backward_train: out_grad shape " +
                         to_string(out_grad.shape()) + " does not match " +
                         to_string(s));
  }
  const ChannelStats st = batch_stats(x);
  const std::size_t plane = s.plane();
  const double count = static_cast<double>(s.n * plane);
  std::vector<double> inv_sd(s.c), dgamma(s.c, 0.0), dbeta(s.c, 0.0);
  for (std::size_t c = 0; c < s.c; ++c) inv_sd[c] = 1.0 / std::sqrt(st.var[c] + state.eps);

  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t c = 0; c < s.c; ++c) {
      const std::size_t base = (n * s.c + c) * plane;
      for (std::size_t i = 0; i < plane; ++i) {
        const double xhat = (x[base + i] - st.mean[c]) * inv_sd[c];
        dgamma[c] += out_grad[base + i] * xhat;
        dbeta[c] += out_grad[base + i];
      }
    }
  }
  nn::LayerGrad g;
  g.input_grad = Tensor(s);
  // dxhat = dy * gamma; sum(dxhat) = gamma * dbeta; sum(dxhat * xhat) = gamma * dgamma.
  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t c = 0; c < s.c; ++c) {
      const std::size_t base = (n * s.c + c) * plane;
      const double gam = state.gamma[c];
      const double k = gam * inv_sd[c] / count;
      for (std::size_t i = 0; i < plane; ++i) {
        const double xhat = (x[base + i] - st.mean[c]) * inv_sd[c];
        g.input_grad[base + i] =
            k * (count * out_grad[base + i] - dbeta[c] - xhat * dgamma[c]);
      }
    }
  }
  g.param_grads["gamma"] = std::move(dgamma);
  g.param_grads["beta"] = std::move(dbeta);
  return g;
}

}  // namespace dua::bn
