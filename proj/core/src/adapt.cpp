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

#include "dua/adapt.hpp"

#include <algorithm>
#include <string>

#include "dua/error.hpp"

namespace dua::adapt {

void AdaptConfig::validate(const nn::Model& model) const {
  if (batch_size == 0) throw ParameterError("AdaptConfig: batch_size must be >= 1");
  schedule.validate();
  if (layer_mask) {
    for (const auto& name : *layer_mask) (void)model.bn_index(name);
  }
}

std::vector<bool> AdaptConfig::mask_for(const nn::Model& model) const {
  std::vector<bool> mask(model.bn_count(), !layer_mask.has_value());
  if (layer_mask) {
    for (const auto& name : *layer_mask) mask[model.bn_index(name)] = true;
  }
  return mask;
}

StepResult dua_adapt_step(nn::Model& model, const Tensor& sample, AdaptConfig& cfg,
                          Xoshiro256pp& rng) {
  cfg.validate(model);
  if (sample.shape().n != 1) {
    throw DimensionError("dua_adapt_step: expected one sample, batch axis n=" +
                         std::to_string(sample.shape().n));
  }
  const shift::AugmentedBatch batch =
      shift::augment_batch(sample, cfg.batch_size, cfg.augmentations, rng);
  StepResult r;
  r.weight = cfg.schedule.step();
  nn::AdaptPlan plan;
  plan.mask = cfg.mask_for(model);
  plan.weight = r.weight;
  plan.normalization = cfg.normalization;
  plan.incoming = &r.incoming;
  r.logits = nn::forward_adapt(model, batch.tensor, plan);
  return r;
}

StepResult fixed_momentum_adapt_step(nn::Model& model, const Tensor& sample,
                                     AdaptConfig& cfg, Xoshiro256pp& rng) {
  if (cfg.schedule.omega != 1.0 || cfg.schedule.zeta != 0.0) {
    const std::uint64_t k = cfg.schedule.k;
    cfg.schedule = bn::MomentumSchedule::fixed(cfg.schedule.rho0);
    cfg.schedule.k = k;
  }
  return dua_adapt_step(model, sample, cfg, rng);
}

void norm_recompute(nn::Model& model, const Tensor& test_batch, std::size_t chunk) {
  const std::size_t n = test_batch.shape().n;
  if (n < 2) {
    throw ParameterError("norm_recompute: needs at least 2 samples, got " +
                         std::to_string(n));
  }
  if (chunk < 2) chunk = 2;
  if (n <= chunk) {
    // A single front-to-back pass: weight 1 replaces every running
    // statistic and normalizes with the replacement.
    nn::AdaptPlan plan;
    plan.mask.assign(model.bn_count(), true);
    plan.weight = 1.0;
    nn::forward_adapt(model, test_batch, plan);
    return;
  }
  for (std::size_t b = 0; b < model.bn_count(); ++b) {
    const std::size_t pos = model.bn_layer_position(b);
    const std::size_t channels = model.bn_state(b).channels();
    std::vector<double> sum(channels, 0.0), sq(channels, 0.0);
    double count = 0.0;
    for (std::size_t off = 0; off < n; off += chunk) {
      const Tensor h = nn::forward_eval_until(
          model, slice_batch(test_batch, off, std::min(chunk, n - off)), pos);
      const Shape& s = h.shape();
      for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t c = 0; c < s.c; ++c)
          for (std::size_t p = 0; p < s.plane(); ++p) sum[c] += h[(i * s.c + c) * s.plane() + p];
      count += static_cast<double>(s.n * s.plane());
    }
    std::vector<double> mean(channels);
    for (std::size_t c = 0; c < channels; ++c) mean[c] = sum[c] / count;
    for (std::size_t off = 0; off < n; off += chunk) {
      const Tensor h = nn::forward_eval_until(
          model, slice_batch(test_batch, off, std::min(chunk, n - off)), pos);
      const Shape& s = h.shape();
      for (std::size_t i = 0; i < s.n; ++i) {
        for (std::size_t c = 0; c < s.c; ++c) {
          for (std::size_t p = 0; p < s.plane(); ++p) {
            const double d = h[(i * s.c + c) * s.plane() + p] - mean[c];
            sq[c] += d * d;
          }
        }
      }
    }
    auto& st = model.bn_state(b);
    st.running_mean = mean;
    for (std::size_t c = 0; c < channels; ++c) st.running_var[c] = sq[c] / count;
  }
}

OnlineAdapter::OnlineAdapter(nn::Model& model, AdaptConfig cfg)
    : model_(&model),
      cfg_(std::move(cfg)),
      rng_(Xoshiro256pp::derive(cfg_.seed, "adapt")) {
  cfg_.validate(model);
}

StepResult OnlineAdapter::step(const Tensor& sample) {
  return dua_adapt_step(*model_, sample, cfg_, rng_);
}

}  // namespace dua::adapt
