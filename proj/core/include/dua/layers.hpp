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

#ifndef DUA_LAYERS_HPP_
#define DUA_LAYERS_HPP_

// Explicit forward/backward kernels for every layer of the desk-scale CNN.
// There is no autodiff graph; each backward is the hand-derived adjoint of
// its forward and is checked against central finite differences in tests.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dua/tensor.hpp"

namespace dua::nn {

/// Gradients produced by one layer's backward pass.
struct LayerGrad {
  Tensor input_grad;
  /// One entry per layer parameter ("weight", "bias", "gamma", "beta"),
  /// flat, in the parameter's own row-major layout.
  std::map<std::string, std::vector<double>> param_grads;
};

/// 2-D cross-correlation with zero padding.
///
/// `weight` is (c_out, c_in, kh, kw). Every output element is accumulated
/// over (c_in, kh, kw) in row-major order starting from zero, and the bias
/// is added last.
Tensor conv2d_forward(const Tensor& x, const Tensor& weight,
                      std::span<const double> bias, std::size_t stride,
                      std::size_t pad);
LayerGrad conv2d_backward(const Tensor& x, const Tensor& weight,
                          const Tensor& out_grad, std::size_t stride,
                          std::size_t pad);

/// Affine map on samples flattened to length d. `weight` is (d_out, d, 1, 1);
/// the result is (n, d_out, 1, 1).
Tensor linear_forward(const Tensor& x, const Tensor& weight,
                      std::span<const double> bias);
LayerGrad linear_backward(const Tensor& x, const Tensor& weight,
                          const Tensor& out_grad);

Tensor relu_forward(const Tensor& x);
void relu_inplace(Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& out_grad);

/// 2x2 stride-2 max pooling; spatial dims must be even. Ties go to the first
/// maximal element in row-major window order.
Tensor maxpool2x2_forward(const Tensor& x);
Tensor maxpool2x2_backward(const Tensor& x, const Tensor& out_grad);

/// (n, c, h, w) -> (n, c*h*w, 1, 1).
Tensor flatten(const Tensor& x);

}  // namespace dua::nn

#endif  // DUA_LAYERS_HPP_
