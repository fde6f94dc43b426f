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

#include "dua/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dua/error.hpp"

namespace dua::nn {

LossResult softmax_cross_entropy(const Tensor& logits, std::span<const int> labels) {
  const std::size_t n = logits.shape().n;
  const std::size_t k = logits.shape().sample_size();
  if (labels.size() != n) {
    throw DimensionError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                         " labels for batch axis n=" + std::to_string(n));
  }
  if (n == 0 || k == 0) throw DimensionError("softmax_cross_entropy: empty logits");
  LossResult r;
  r.logit_grad = Tensor(logits.shape());
  const double inv_n = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= k) {
      throw IndexError("softmax_cross_entropy: label " + std::to_string(y) +
                       " at position " + std::to_string(i) + " outside [0, " +
                       std::to_string(k) + ")");
    }
    auto row = logits.sample(i);
    const double m = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double v : row) z += std::exp(v - m);
    const double log_z = std::log(z);
    total += log_z - (row[static_cast<std::size_t>(y)] - m);
    auto g = r.logit_grad.sample(i);
    for (std::size_t j = 0; j < k; ++j) {
      const double p = std::exp(row[j] - m - log_z);
      g[j] = (p - (j == static_cast<std::size_t>(y) ? 1.0 : 0.0)) * inv_n;
    }
  }
  r.loss = total * inv_n;
  return r;
}

}  // namespace dua::nn
