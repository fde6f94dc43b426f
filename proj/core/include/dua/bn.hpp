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

#ifndef DUA_BN_HPP_
#define DUA_BN_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "dua/layers.hpp"
#include "dua/tensor.hpp"

namespace dua::bn {

/// Per-channel batch-normalization state.
///
/// `running_mean` / `running_var` are the population estimates used at
/// inference and are the only fields test-time adaptation ever writes.
struct BatchNormState {
  std::vector<double> running_mean;
  std::vector<double> running_var;
  std::vector<double> gamma;
  std::vector<double> beta;
  double eps = 1e-5;
  double train_momentum = 0.1;

  /// mean 0, var 1, gamma 1, beta 0.
  static BatchNormState fresh(std::size_t channels);

  [[nodiscard]] std::size_t channels() const { return gamma.size(); }
  /// Throws ParameterError / NumericError when an invariant is broken.
  void validate() const;

  friend bool operator==(const BatchNormState&, const BatchNormState&) = default;
};

struct ChannelStats {
  std::vector<double> mean;
  std::vector<double> var;  ///< biased (divide by count)
};

/// Per-channel mean and biased variance over the N, H, W axes.
ChannelStats batch_stats(const Tensor& x);

/// (x - mean) / sqrt(var + eps) * gamma + beta, per channel.
Tensor bn_normalize(const Tensor& x, std::span<const double> mean,
                    std::span<const double> var, const BatchNormState& state);

/// In-place form of bn_normalize.
void bn_normalize_inplace(Tensor& x, std::span<const double> mean,
                          std::span<const double> var, const BatchNormState& state);

/// (1 - w) * prev + w * batch, elementwise. Requires 0 < w <= 1.
std::vector<double> ema_update(std::span<const double> prev,
                               std::span<const double> batch, double w);

/// Normalizes with batch statistics, then folds them into the running
/// estimates with weight `rho`.
Tensor bn_forward_train(const Tensor& x, BatchNormState& state, double rho);

/// Normalizes with the frozen running statistics.
Tensor bn_forward_eval(const Tensor& x, const BatchNormState& state);

/// Which running statistics adapt-mode output is normalized with.
enum class AdaptNormalization { post_update, pre_update };

/// Test-time update: running mean and variance both move toward the
/// incoming batch statistics with the same weight `w` in [0, 1]; w == 0
/// leaves the state untouched. gamma and beta are never written.
/// If `incoming` is non-null it receives the batch statistics.
Tensor bn_forward_adapt(const Tensor& x, BatchNormState& state, double w,
                        AdaptNormalization norm = AdaptNormalization::post_update,
                        ChannelStats* incoming = nullptr);

/// Adjoint of the train-mode forward (normalization by batch statistics).
/// Produces input, "gamma" and "beta" gradients.
nn::LayerGrad bn_backward_train(const Tensor& x, const BatchNormState& state,
                                const Tensor& out_grad);

}  // namespace dua::bn

#endif  // DUA_BN_HPP_
