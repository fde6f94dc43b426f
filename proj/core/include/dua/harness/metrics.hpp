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

#ifndef DUA_HARNESS_METRICS_HPP_
#define DUA_HARNESS_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dua/dataset.hpp"
#include "dua/model.hpp"

namespace dua::harness {

/// Top-1 error in percent.
double error_pct(const nn::Model& model, const shift::Dataset& data);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> v);
double l2_distance(std::span<const double> a, std::span<const double> b);

/// 1-Wasserstein distance between two empirical samples (any sizes).
double wasserstein1(std::vector<double> a, std::vector<double> b);

/// Counts of `values` in `bins` equal-width bins over [lo, hi]; the top edge
/// is inclusive so every value inside the range lands in a bin.
std::vector<std::size_t> histogram(std::span<const double> values, double lo,
                                   double hi, std::size_t bins);

/// FNV-1a over the bytes of every BN running mean and variance.
std::uint64_t running_stat_hash(const nn::Model& model);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0: hardware
/// concurrency). Exceptions are rethrown on the calling thread.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace dua::harness

#endif  // DUA_HARNESS_METRICS_HPP_
