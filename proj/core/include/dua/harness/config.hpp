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

#ifndef DUA_HARNESS_CONFIG_HPP_
#define DUA_HARNESS_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dua/adapt.hpp"
#include "dua/augment.hpp"
#include "dua/corruption.hpp"

namespace dua::harness {

enum class Command {
  train,
  eval,
  adapt_curve,
  shuffle_stability,
  omega_sweep,
  layer_ablation,
  cycle,
  density,
  norm_baseline,
};

std::string_view to_string(Command c);
/// Throws ConfigError for unknown names.
Command parse_command(std::string_view name);

struct TrainConfig {
  std::size_t n_train = 10000;
  std::size_t epochs = 5;
  std::size_t batch_size = 64;
  double lr = 0.05;
  double momentum = 0.9;
  /// Per-sample augmentation drawn each time a sample is visited.
  shift::AugmentSet augmentations{false, true, false};
};

/// Harness defaults: library defaults with crop-only augmentation, the
/// usual choice for digit-like data.
inline adapt::AdaptConfig default_adapt_config() {
  adapt::AdaptConfig a;
  a.augmentations = shift::AugmentSet{false, true, false};
  return a;
}

/// One leg of a continuous-adaptation schedule.
struct CycleSegment {
  bool corrupted = false;
  std::size_t samples = 0;
};

/// Everything a run needs. Serialized as a flat JSON object; see
/// docs/config.md for the key list.
struct ExperimentConfig {
  Command command = Command::adapt_curve;
  std::string dataset = "synthetic";  ///< "synthetic" or "mnist"
  std::string mnist_dir = "data/mnist";
  std::size_t n_test = 10000;
  shift::CorruptionSpec corruption{shift::CorruptionKind::gaussian_noise, 5};
  adapt::AdaptConfig adapt = default_adapt_config();
  std::size_t n_adapt_samples = 80;
  std::size_t n_runs = 30;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::string checkpoint = "out/source.dua";
  std::size_t eval_slice = 2000;
  std::size_t eval_every = 1;  ///< 0: first, last and fixed points only
  bool full_eval = true;
  TrainConfig train;
  std::vector<double> omegas = {1.0, 0.98, 0.94, 0.9, 0.7, 0.5};
  std::vector<CycleSegment> cycle = {
      {false, 100}, {true, 100}, {false, 100}, {true, 100}, {false, 100}};
  std::string density_layer = "bn3";
  std::size_t density_samples = 1000;
  std::size_t density_bins = 64;
  std::vector<std::size_t> norm_batch_sizes = {16, 64, 512};
  bool fixed_arm = true;
  bool norm_arm = true;
  std::vector<std::size_t> stability_checkpoints = {5, 25, 100};
  bool identical_run_seeds = false;
  std::size_t threads = 0;  ///< 0: hardware concurrency

  /// Throws ConfigError when a value is out of range or inconsistent.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults; unknown keys are a ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  ExperimentConfig base = {});
/// Throws ConfigError if the file is missing or is not valid JSON.
ExperimentConfig load_config(const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over the canonical JSON dump, minus
/// output_dir and threads.
std::string config_hash(const ExperimentConfig& cfg);

/// Stable per-purpose seed derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

}  // namespace dua::harness

#endif  // DUA_HARNESS_CONFIG_HPP_
