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

#ifndef DUA_ORACLE_HPP_
#define DUA_ORACLE_HPP_

// Brute-force references for tests. Nothing here calls into the production
// kernels it is used to check; only the Tensor container is shared.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dua/tensor.hpp"

namespace dua::oracle {

struct Stats {
  std::vector<double> mean;
  std::vector<double> var;
};

/// Per-channel mean, then biased variance from a second pass over squared
/// deviations. Throws DimensionError on an empty tensor.
Stats two_pass_stats(const Tensor& x);

/// Replay of an exponential moving average.
struct EmaTrace {
  double initial = 0.0;
  std::vector<double> weights;  ///< w_1..w_k, each in (0, 1]
  std::vector<double> inputs;   ///< mu_1..mu_k
};

/// prod(1 - w_i) * initial + sum_i w_i * prod_{j > i}(1 - w_j) * mu_i.
double ema_closed_form(const EmaTrace& trace);

/// Six nested loops; skips out-of-bounds taps. Accumulates each output over
/// (c_in, kh, kw) in row-major order from zero and adds the bias last.
Tensor naive_conv(const Tensor& x, const Tensor& w, std::span<const double> bias,
                  std::size_t stride, std::size_t pad);

/// Central differences of a scalar function. Throws ParameterError if
/// step <= 0.
std::vector<double> fd_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> point, double step = 1e-6);

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor).
double max_relative_error(std::span<const double> a, std::span<const double> b,
                          double floor = 1e-8);

}  // namespace dua::oracle

#endif  // DUA_ORACLE_HPP_
