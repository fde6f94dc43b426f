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

#ifndef DUA_ADAPT_HPP_
#define DUA_ADAPT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dua/augment.hpp"
#include "dua/bn.hpp"
#include "dua/model.hpp"
#include "dua/momentum.hpp"
#include "dua/rng.hpp"

namespace dua::adapt {

struct AdaptConfig {
  std::size_t batch_size = 64;
  shift::AugmentSet augmentations = shift::AugmentSet::all();
  /// BN layers to adapt; nullopt means every BN layer.
  std::optional<std::vector<std::string>> layer_mask;
  bn::MomentumSchedule schedule;
  std::uint64_t seed = 0;
  bn::AdaptNormalization normalization = bn::AdaptNormalization::post_update;

  /// Throws ParameterError if batch_size is 0, the schedule is invalid or
  /// the mask names a layer `model` does not have.
  void validate(const nn::Model& model) const;
  /// One flag per BN layer of `model`.
  [[nodiscard]] std::vector<bool> mask_for(const nn::Model& model) const;
};

/// What one adaptation step did.
struct StepResult {
  Tensor logits;   ///< (B, K, 1, 1), one row per augmented item
  double weight;   ///< EMA weight shared by every masked layer
  /// Incoming batch statistics per BN layer (empty for unmasked layers).
  std::vector<bn::ChannelStats> incoming;
};

/// One online step on a single unlabeled sample (1, C, H, W): builds an
/// augmented batch, advances `cfg.schedule` once and runs an adapt-mode
/// forward. Only running means and variances of masked BN layers change.
StepResult dua_adapt_step(nn::Model& model, const Tensor& sample,
                          AdaptConfig& cfg, Xoshiro256pp& rng);

/// Same pipeline with a constant weight `cfg.schedule.rho0`; the schedule in
/// `cfg` is replaced by MomentumSchedule::fixed(rho0) on first use.
StepResult fixed_momentum_adapt_step(nn::Model& model, const Tensor& sample,
                                     AdaptConfig& cfg, Xoshiro256pp& rng);

/// NORM baseline: replaces every BN layer's running statistics with the
/// statistics of its input over `test_batch`, front to back. Batches larger
/// than `chunk` are streamed in two passes per layer. Throws ParameterError
/// for fewer than two samples.
void norm_recompute(nn::Model& model, const Tensor& test_batch,
                    std::size_t chunk = 256);

/// Owns a schedule and RNG stream and applies dua_adapt_step to a stream of
/// samples.
class OnlineAdapter {
 public:
  OnlineAdapter(nn::Model& model, AdaptConfig cfg);

  StepResult step(const Tensor& sample);
  [[nodiscard]] const bn::MomentumSchedule& schedule() const {
    return cfg_.schedule;
  }
  [[nodiscard]] const AdaptConfig& config() const { return cfg_; }

 private:
  nn::Model* model_;
  AdaptConfig cfg_;
  Xoshiro256pp rng_;
};

}  // namespace dua::adapt

#endif  // DUA_ADAPT_HPP_
