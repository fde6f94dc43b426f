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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dua/augment.hpp"
#include "dua/bn.hpp"
#include "dua/checkpoint.hpp"
#include "dua/error.hpp"
#include "dua/model.hpp"
#include "dua/rng.hpp"
#include "test_util.hpp"

namespace dua::adapt {
namespace {

using dua::testing::random_tensor;

Tensor image(std::uint64_t seed) {
  return random_tensor(Shape{1, 1, 28, 28}, seed, 0.0, 1.0);
}

AdaptConfig small_config(std::size_t batch = 8) {
  AdaptConfig cfg;
  cfg.batch_size = batch;
  return cfg;
}

TEST(AdaptConfigTest, ValidateAndMask) {
  nn::Model m = nn::make_desk_cnn(0);
  AdaptConfig cfg;
  EXPECT_EQ(cfg.mask_for(m), (std::vector<bool>{true, true, true}));
  cfg.layer_mask = std::vector<std::string>{"bn2"};
  EXPECT_EQ(cfg.mask_for(m), (std::vector<bool>{false, true, false}));
  EXPECT_NO_THROW(cfg.validate(m));
  cfg.layer_mask = std::vector<std::string>{"conv1"};
  EXPECT_THROW(cfg.validate(m), ParameterError);
  cfg.layer_mask.reset();
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(m), ParameterError);
}

TEST(AdaptStepTest, EmptyMaskIsNoOp) {
  nn::Model m = nn::make_desk_cnn(1);
  const nn::Model before = m;
  AdaptConfig cfg = small_config();
  cfg.layer_mask = std::vector<std::string>{};
  Xoshiro256pp rng(5), replay(5);
  const Tensor x = image(2);
  StepResult r = dua_adapt_step(m, x, cfg, rng);
  EXPECT_EQ(m, before);
  const auto batch = shift::augment_batch(x, cfg.batch_size, cfg.augmentations, replay);
  EXPECT_EQ(r.logits, nn::forward_eval(before, batch.tensor));
}

TEST(AdaptStepTest, RejectsBatchedInput) {
  nn::Model m = nn::make_desk_cnn(1);
  AdaptConfig cfg = small_config();
  Xoshiro256pp rng(0);
  EXPECT_THROW((void)dua_adapt_step(m, Tensor(Shape{2, 1, 28, 28}), cfg, rng),
               DimensionError);
}

TEST(AdaptStepTest, UsesScheduledWeightAndAdvances) {
  nn::Model m = nn::make_desk_cnn(1);
  AdaptConfig cfg = small_config();
  Xoshiro256pp rng(0);
  StepResult r1 = dua_adapt_step(m, image(1), cfg, rng);
  EXPECT_NEAR(r1.weight, 0.099, 1e-15);
  StepResult r2 = dua_adapt_step(m, image(2), cfg, rng);
  EXPECT_NEAR(r2.weight, 0.1 * 0.94 * 0.94 + 0.005, 1e-15);
  EXPECT_EQ(cfg.schedule.k, 2u);
  EXPECT_EQ(r1.incoming.size(), 3u);
}

TEST(AdaptStepTest, OnlyRunningStatsChange) {
  nn::Model m = nn::make_desk_cnn(3);
  const auto before = nn::serialize(m);
  AdaptConfig cfg = small_config(16);
  cfg.augmentations = shift::AugmentSet::all();
  Xoshiro256pp rng(9);
  for (std::uint64_t i = 0; i < 100; ++i) (void)dua_adapt_step(m, image(100 + i), cfg, rng);
  const auto after = nn::serialize(m);
  ASSERT_EQ(before.size(), after.size());
  const auto layout = nn::checkpoint_layout(m);
  const std::size_t header = layout.front().offset;
  EXPECT_TRUE(std::equal(before.begin(), before.begin() + header, after.begin()));
  for (const auto& seg : layout) {
    const bool same = std::equal(before.begin() + seg.offset,
                                 before.begin() + seg.offset + seg.length,
                                 after.begin() + seg.offset);
    if (seg.running_stat) {
      EXPECT_FALSE(same) << seg.layer << " " << seg.name;
    } else {
      EXPECT_TRUE(same) << seg.layer << " " << seg.name;
    }
  }
}

TEST(AdaptStepTest, UnmaskedLayersUntouched) {
  nn::Model m = nn::make_desk_cnn(4);
  const nn::Model before = m;
  AdaptConfig cfg = small_config();
  cfg.layer_mask = std::vector<std::string>{"bn2"};
  Xoshiro256pp rng(1);
  for (std::uint64_t i = 0; i < 5; ++i) (void)dua_adapt_step(m, image(i), cfg, rng);
  EXPECT_EQ(m.bn_state("bn1"), before.bn_state("bn1"));
  EXPECT_EQ(m.bn_state("bn3"), before.bn_state("bn3"));
  EXPECT_NE(m.bn_state("bn2"), before.bn_state("bn2"));
}

TEST(AdaptStepTest, ReplayIsBitIdentical) {
  nn::Model a = nn::make_desk_cnn(6), b = a;
  AdaptConfig ca = small_config(), cb = small_config();
  ca.seed = cb.seed = 77;
  OnlineAdapter ad_a(a, ca), ad_b(b, cb);
  for (std::uint64_t i = 0; i < 10; ++i) {
    EXPECT_EQ(ad_a.step(image(i)).logits, ad_b.step(image(i)).logits);
  }
  EXPECT_EQ(a, b);
  EXPECT_EQ(ad_a.schedule().k, 10u);
}

TEST(FixedMomentumTest, EqualsDuaWithUnitOmegaZeroZeta) {
  nn::Model a = nn::make_desk_cnn(7), b = a;
  AdaptConfig ca = small_config(), cb = small_config();
  ca.schedule = bn::MomentumSchedule::make(0.1, 0.94, 0.005);
  cb.schedule = bn::MomentumSchedule::make(0.1, 1.0, 0.0);
  Xoshiro256pp ra(3), rb(3);
  for (std::uint64_t i = 0; i < 6; ++i) {
    StepResult x = fixed_momentum_adapt_step(a, image(i), ca, ra);
    StepResult y = dua_adapt_step(b, image(i), cb, rb);
    EXPECT_EQ(x.weight, 0.1);
    EXPECT_EQ(x.logits, y.logits);
  }
  EXPECT_EQ(a, b);
}

TEST(FixedMomentumTest, VanishingRhoLeavesModel) {
  nn::Model m = nn::make_desk_cnn(8);
  const nn::Model before = m;
  AdaptConfig cfg = small_config();
  cfg.schedule = bn::MomentumSchedule::fixed(1e-300);
  Xoshiro256pp rng(0);
  for (std::uint64_t i = 0; i < 5; ++i) (void)fixed_momentum_adapt_step(m, image(i), cfg, rng);
  EXPECT_EQ(nn::serialize(m).size(), nn::serialize(before).size());
  for (std::size_t b = 0; b < m.bn_count(); ++b) {
    const auto& s = m.bn_state(b);
    const auto& s0 = before.bn_state(b);
    for (std::size_t c = 0; c < s.channels(); ++c) {
      // Zero-initialized means pick up terms of order rho0, nothing more.
      EXPECT_NEAR(s.running_mean[c], s0.running_mean[c], 1e-290);
      EXPECT_EQ(s.running_var[c], s0.running_var[c]);
    }
    EXPECT_EQ(s.gamma, s0.gamma);
    EXPECT_EQ(s.beta, s0.beta);
  }
}

// Noisy stationary stream through one BN channel: the fixed weight keeps
// taking steps of order w * noise, the decaying weight settles.
TEST(FixedMomentumTest, StepSizeDoesNotDecayOnNoisyStream) {
  constexpr double kNoise = 1.0;
  Xoshiro256pp rng(11);
  bn::BatchNormState fixed = bn::BatchNormState::fresh(1);
  bn::BatchNormState dua = fixed;
  bn::MomentumSchedule fs = bn::MomentumSchedule::fixed(0.1);
  bn::MomentumSchedule ds;
  double fixed_avg = 0.0, dua_avg = 0.0;
  for (int k = 1; k <= 200; ++k) {
    Tensor x(Shape{4, 1, 1, 1});
    for (auto& v : x.data()) v = 2.0 + kNoise * rng.normal();
    const double f0 = fixed.running_mean[0], d0 = dua.running_mean[0];
    (void)bn::bn_forward_adapt(x, fixed, fs.step());
    (void)bn::bn_forward_adapt(x, dua, ds.step());
    if (k > 100) {
      fixed_avg += std::abs(fixed.running_mean[0] - f0) / 100.0;
      dua_avg += std::abs(dua.running_mean[0] - d0) / 100.0;
    }
  }
  EXPECT_GT(fixed_avg, 0.01 * kNoise);
  EXPECT_LT(dua_avg, 0.1 * fixed_avg);
}

TEST(NormRecomputeTest, SingleSampleRejected) {
  nn::Model m = nn::make_desk_cnn(0);
  EXPECT_THROW(norm_recompute(m, image(0)), ParameterError);
}

TEST(NormRecomputeTest, IdempotentOnSameBatch) {
  nn::Model m = nn::make_desk_cnn(2);
  Tensor batch = random_tensor(Shape{32, 1, 28, 28}, 50, 0.0, 1.0);
  norm_recompute(m, batch);
  const nn::Model once = m;
  norm_recompute(m, batch);
  for (std::size_t b = 0; b < m.bn_count(); ++b) {
    for (std::size_t c = 0; c < m.bn_state(b).channels(); ++c) {
      EXPECT_NEAR(m.bn_state(b).running_mean[c], once.bn_state(b).running_mean[c], 1e-10);
      EXPECT_NEAR(m.bn_state(b).running_var[c], once.bn_state(b).running_var[c], 1e-10);
    }
  }
}

TEST(NormRecomputeTest, ChunkedMatchesSinglePass) {
  nn::Model a = nn::make_desk_cnn(3), b = a;
  Tensor batch = random_tensor(Shape{40, 1, 28, 28}, 51, 0.0, 1.0);
  norm_recompute(a, batch, 256);
  norm_recompute(b, batch, 7);
  for (std::size_t l = 0; l < a.bn_count(); ++l) {
    for (std::size_t c = 0; c < a.bn_state(l).channels(); ++c) {
      EXPECT_NEAR(a.bn_state(l).running_mean[c], b.bn_state(l).running_mean[c], 1e-10);
      EXPECT_NEAR(a.bn_state(l).running_var[c], b.bn_state(l).running_var[c], 1e-10);
    }
  }
}

TEST(NormRecomputeTest, FirstLayerMatchesBatchStats) {
  nn::Model m = nn::make_desk_cnn(4);
  Tensor batch = random_tensor(Shape{16, 1, 28, 28}, 52, 0.0, 1.0);
  norm_recompute(m, batch);
  const Tensor pre = nn::forward_eval_until(m, batch, m.bn_layer_position(0));
  const bn::ChannelStats st = bn::batch_stats(pre);
  for (std::size_t c = 0; c < st.mean.size(); ++c) {
    EXPECT_NEAR(m.bn_state(0).running_mean[c], st.mean[c], 1e-12);
    EXPECT_NEAR(m.bn_state(0).running_var[c], st.var[c], 1e-12);
  }
}

}  // namespace
}  // namespace dua::adapt
