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

#ifndef DUA_LOSS_HPP_
#define DUA_LOSS_HPP_

#include <span>

#include "dua/tensor.hpp"

namespace dua::nn {

struct LossResult {
  double loss = 0.0;    ///< mean over the batch
  Tensor logit_grad;    ///< (softmax - onehot) / n
};

/// Softmax cross-entropy over (n, K, 1, 1) logits, computed with
/// max-subtraction. Throws IndexError for labels outside [0, K).
LossResult softmax_cross_entropy(const Tensor& logits,
                                 std::span<const int> labels);

}  // namespace dua::nn

#endif  // DUA_LOSS_HPP_
