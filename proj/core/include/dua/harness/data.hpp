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

#ifndef DUA_HARNESS_DATA_HPP_
#define DUA_HARNESS_DATA_HPP_

#include <cstddef>
#include <vector>

#include "dua/dataset.hpp"
#include "dua/harness/config.hpp"

namespace dua::harness {

/// Datasets and index splits shared by every runner.
///
/// The test set is permuted once by seed; the first `eval_slice` indices
/// form the fixed evaluation slice and the rest form the adaptation pool,
/// so streams never touch evaluation images.
struct Workbench {
  shift::Dataset train;  ///< empty unless requested
  shift::Dataset test_clean;
  shift::Dataset test_corrupt;
  std::vector<std::size_t> eval_indices;
  std::vector<std::size_t> pool_indices;
  shift::Dataset eval_clean;
  shift::Dataset eval_corrupt;
};

/// Throws IoError when MNIST files are missing and ConfigError when the
/// split cannot hold the requested sample budget.
Workbench make_workbench(const ExperimentConfig& cfg, bool with_train);

/// First `n` pool indices after a seed-driven shuffle of the pool.
std::vector<std::size_t> shuffled_stream(const Workbench& wb, std::size_t n,
                                         std::uint64_t seed);

}  // namespace dua::harness

#endif  // DUA_HARNESS_DATA_HPP_
