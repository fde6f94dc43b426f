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

#include "dua/model.hpp"

#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "dua/bn.hpp"
#include "dua/error.hpp"
#include "dua/loss.hpp"
#include "dua/oracle.hpp"
#include "dua/sgd.hpp"
#include "test_util.hpp"

namespace dua::nn {
namespace {

using dua::testing::random_tensor;
using dua::testing::random_vector;

// Single scalar parameter p (a 1x1 linear weight) with a zero bias.
Model scalar_model(double p) {
  Linear lin{Tensor(Shape{1, 1, 1, 1}, p), {0.0}};
  return Model(Shape{0, 1, 1, 1}, {Flatten{}, lin});
}

std::vector<LayerGrad> scalar_grads(double g) {
  std::vector<LayerGrad> grads(2);
  grads[1].param_grads["weight"] = {g};
  grads[1].param_grads["bias"] = {0.0};
  return grads;
}

double scalar_weight(const Model& m) {
  return std::get<Linear>(m.layer(1)).weight[0];
}

// conv -> bn -> relu -> maxpool -> flatten -> linear
Model small_bn_model(std::uint64_t seed) {
  Conv2d conv{random_tensor(Shape{3, 1, 3, 3}, seed), random_vector(3, seed + 1), 1, 1};
  BatchNorm bn{"bn1", bn::BatchNormState::fresh(3)};
  bn.state.gamma = random_vector(3, seed + 2, 0.5, 1.5);
  bn.state.beta = random_vector(3, seed + 3);
  Linear lin{random_tensor(Shape{4, 12, 1, 1}, seed + 4), random_vector(4, seed + 5)};
  return Model(Shape{0, 1, 4, 4},
               {conv, bn, ReLU{}, MaxPool2x2{}, Flatten{}, lin});
}

TEST(SgdTest, PlainStep) {
  Model m = scalar_model(0.0);
  SgdState st;
  sgd_step(m, scalar_grads(1.0), 1.0, 0.0, st);
  EXPECT_EQ(scalar_weight(m), -1.0);
}

TEST(SgdTest, ZeroGradientLeavesParameters) {
  Model m = make_desk_cnn(3);
  const Model before = m;
  std::vector<LayerGrad> grads(m.size());
  for (const auto& p : m.parameters()) {
    grads[p.layer].param_grads[p.name] = std::vector<double>(p.values.size(), 0.0);
  }
  SgdState st;
  sgd_step(m, grads, 0.5, 0.9, st);
  EXPECT_EQ(m, before);
}

TEST(SgdTest, TwoMomentumStepsUnrolled) {
  Model m = scalar_model(0.0);
  SgdState st;
  sgd_step(m, scalar_grads(1.0), 0.1, 0.9, st);
  sgd_step(m, scalar_grads(1.0), 0.1, 0.9, st);
  EXPECT_NEAR(scalar_weight(m), -0.29, 1e-15);
}

TEST(SgdTest, RejectsBadHyperparameters) {
  Model m = scalar_model(0.0);
  SgdState st;
  EXPECT_THROW(sgd_step(m, scalar_grads(1.0), 0.0, 0.0, st), ParameterError);
  EXPECT_THROW(sgd_step(m, scalar_grads(1.0), 0.1, 1.0, st), ParameterError);
}

TEST(SgdTest, DoesNotTouchRunningStats) {
  Model m = small_bn_model(1);
  m.bn_state(0).running_mean = {0.3, -0.2, 0.1};
  const auto mean = m.bn_state(0).running_mean;
  const auto var = m.bn_state(0).running_var;
  std::vector<LayerGrad> grads(m.size());
  for (const auto& p : m.parameters()) {
    grads[p.layer].param_grads[p.name] = std::vector<double>(p.values.size(), 1.0);
  }
  SgdState st;
  sgd_step(m, grads, 0.1, 0.5, st);
  EXPECT_EQ(m.bn_state(0).running_mean, mean);
  EXPECT_EQ(m.bn_state(0).running_var, var);
}

TEST(ModelTest, DeskCnnLayout) {
  Model m = make_desk_cnn(0);
  EXPECT_EQ(m.bn_names(), (std::vector<std::string>{"bn1", "bn2", "bn3"}));
  EXPECT_EQ(m.input_shape().c, 1u);
  EXPECT_EQ(m.input_shape().h, 28u);
  EXPECT_EQ(m.output_shape(5), (Shape{5, 10, 1, 1}));
  EXPECT_EQ(m.bn_state("bn3").channels(), 64u);
  EXPECT_THROW((void)m.bn_index("bn4"), ParameterError);
}

TEST(ModelTest, RejectsIncompatibleLayers) {
  Linear lin{Tensor(Shape{2, 5, 1, 1}), {0.0, 0.0}};
  EXPECT_THROW(Model(Shape{0, 1, 2, 2}, {Flatten{}, lin}), DimensionError);
  EXPECT_THROW(Model(Shape{0, 1, 3, 3}, {MaxPool2x2{}}), DimensionError);
}

TEST(ModelTest, RejectsDuplicateBnNames) {
  BatchNorm a{"x", bn::BatchNormState::fresh(1)};
  EXPECT_THROW(Model(Shape{0, 1, 2, 2}, {a, a}), ParameterError);
  BatchNorm unnamed{"", bn::BatchNormState::fresh(1)};
  EXPECT_THROW(Model(Shape{0, 1, 2, 2}, {unnamed}), ParameterError);
}

TEST(ModelTest, RejectsWrongInputShape) {
  Model m = make_desk_cnn(0);
  EXPECT_THROW((void)forward_eval(m, Tensor(Shape{1, 1, 27, 28})), DimensionError);
}

TEST(ModelTest, NoBnModelIgnoresMode) {
  Conv2d conv{random_tensor(Shape{2, 1, 3, 3}, 5), random_vector(2, 6), 1, 1};
  Linear lin{random_tensor(Shape{3, 8, 1, 1}, 7), random_vector(3, 8)};
  Model m(Shape{0, 1, 4, 4}, {conv, ReLU{}, MaxPool2x2{}, Flatten{}, lin});
  Tensor x = random_tensor(Shape{2, 1, 4, 4}, 9);
  AdaptPlan plan{{}, 0.1};
  Tensor e = model_forward(m, x, Mode::eval);
  EXPECT_EQ(model_forward(m, x, Mode::train), e);
  EXPECT_EQ(model_forward(m, x, Mode::adapt, &plan), e);
}

TEST(ModelTest, EvalIsPureAndRepeatable) {
  Model m = make_desk_cnn(1);
  const Model before = m;
  Tensor x = random_tensor(Shape{3, 1, 28, 28}, 10, 0.0, 1.0);
  Tensor a = model_forward(m, x, Mode::eval);
  Tensor b = model_forward(m, x, Mode::eval);
  EXPECT_EQ(a, b);
  EXPECT_EQ(m, before);
}

TEST(ModelTest, TrainForwardUpdatesRunningStatsOnce) {
  Model m = small_bn_model(20);
  Tensor x = random_tensor(Shape{4, 1, 4, 4}, 21);
  const auto& conv = std::get<Conv2d>(m.layer(0));
  Tensor pre = oracle::naive_conv(x, conv.weight, conv.bias, 1, 1);
  const oracle::Stats st = oracle::two_pass_stats(pre);
  const bn::BatchNormState s0 = m.bn_state(0);
  (void)forward_train(m, x);
  const bn::BatchNormState& s1 = m.bn_state(0);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_NEAR(s1.running_mean[c], 0.9 * s0.running_mean[c] + 0.1 * st.mean[c], 1e-12);
    EXPECT_NEAR(s1.running_var[c], 0.9 * s0.running_var[c] + 0.1 * st.var[c], 1e-12);
  }
  EXPECT_EQ(s1.gamma, s0.gamma);
  EXPECT_EQ(s1.beta, s0.beta);
}

TEST(ModelTest, BackwardMatchesFiniteDifferences) {
  Model m = small_bn_model(30);
  Tensor x = random_tensor(Shape{3, 1, 4, 4}, 31);
  const std::vector<int> labels{0, 3, 1};
  ForwardCache cache;
  Model work = m;
  Tensor logits = forward_train(work, x, &cache);
  LossResult lr = softmax_cross_entropy(logits, labels);
  std::vector<LayerGrad> grads = model_backward(m, cache, lr.logit_grad);

  const auto params = m.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    auto f = [&](std::span<const double> v) {
      Model probe = m;
      auto pp = probe.parameters();
      std::copy(v.begin(), v.end(), pp[i].values.begin());
      return softmax_cross_entropy(forward_train(probe, x), labels).loss;
    };
    const auto fd = oracle::fd_gradient(f, p.values, 1e-6);
    EXPECT_LT(oracle::max_relative_error(grads[p.layer].param_grads.at(p.name), fd),
              1e-4)
        << "layer " << p.layer << " " << p.name;
  }
}

TEST(ModelTest, PredictArgmax) {
  Model cnn = make_desk_cnn(2);
  Tensor x = random_tensor(Shape{7, 1, 28, 28}, 40, 0.0, 1.0);
  const auto pred = predict(cnn, x, 3);
  Tensor logits = forward_eval(cnn, x);
  ASSERT_EQ(pred.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    int best = 0;
    for (int k = 1; k < 10; ++k) {
      if (logits.at(i, k, 0, 0) > logits.at(i, best, 0, 0)) best = k;
    }
    EXPECT_EQ(pred[i], best);
  }
}

}  // namespace
}  // namespace dua::nn
