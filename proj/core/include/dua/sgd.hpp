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

#ifndef DUA_SGD_HPP_
#define DUA_SGD_HPP_

#include <vector>

#include "dua/layers.hpp"
#include "dua/model.hpp"

namespace dua::nn {

/// Heavy-ball velocity, one buffer per parameter in Model::parameters order.
struct SgdState {
  std::vector<std::vector<double>> velocity;
};

/// v <- momentum * v + g; p <- p - lr * v.
///
/// `grads` holds one LayerGrad per layer, as returned by model_backward.
/// Running BN statistics are not touched.
void sgd_step(Model& model, const std::vector<LayerGrad>& grads, double lr,
              double momentum, SgdState& state);

}  // namespace dua::nn

#endif  // DUA_SGD_HPP_
