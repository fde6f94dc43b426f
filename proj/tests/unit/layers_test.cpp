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

#include "dua/layers.hpp"

#include <cmath>
#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "dua/error.hpp"
#include "dua/loss.hpp"
#include "dua/oracle.hpp"
#include "test_util.hpp"

namespace dua::nn {
namespace {

using dua::testing::dot;
using dua::testing::random_tensor;
using dua::testing::random_vector;

constexpr double kFdStep = 1e-6;
constexpr double kFdTol = 1e-4;

TEST(Conv2dTest, AllOnesGivesNine) {
  Tensor x(Shape{1, 1, 3, 3}, 1.0);
  Tensor w(Shape{1, 1, 3, 3}, 1.0);
  const std::vector<double> b{0.0};
  Tensor y = conv2d_forward(x, w, b, 1, 0);
  ASSERT_EQ(y.shape(), (Shape{1, 1, 1, 1}));
  EXPECT_EQ(y[0], 9.0);
}

TEST(Conv2dTest, CenteredIdentityKernelWithPadOne) {
  Tensor x = random_tensor(Shape{2, 1, 5, 6}, 11);
  Tensor w(Shape{1, 1, 3, 3});
  w.at(0, 0, 1, 1) = 1.0;
  const std::vector<double> b{0.0};
  EXPECT_EQ(conv2d_forward(x, w, b, 1, 1), x);
}

TEST(Conv2dTest, OutputShapeWithStride) {
  Tensor x(Shape{1, 2, 7, 8});
  Tensor w(Shape{3, 2, 3, 3});
  const std::vector<double> b(3, 0.0);
  EXPECT_EQ(conv2d_forward(x, w, b, 2, 1).shape(), (Shape{1, 3, 4, 4}));
}

TEST(Conv2dTest, MatchesNaiveOracle) {
  Tensor x = random_tensor(Shape{2, 3, 8, 8}, 1);
  Tensor w = random_tensor(Shape{4, 3, 3, 3}, 2);
  const auto b = random_vector(4, 3);
  Tensor fast = conv2d_forward(x, w, b, 1, 1);
  Tensor ref = oracle::naive_conv(x, w, b, 1, 1);
  ASSERT_EQ(fast.shape(), ref.shape());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    EXPECT_NEAR(fast[i], ref[i], 1e-12);
  }
}

TEST(Conv2dTest, ChannelMismatchIsDimensionError) {
  Tensor x(Shape{1, 2, 4, 4});
  Tensor w(Shape{1, 3, 3, 3});
  const std::vector<double> b{0.0};
  EXPECT_THROW((void)conv2d_forward(x, w, b, 1, 1), DimensionError);
  const std::vector<double> bad_bias{0.0, 0.0};
  Tensor w2(Shape{1, 2, 3, 3});
  EXPECT_THROW((void)conv2d_forward(x, w2, bad_bias, 1, 1), DimensionError);
}

TEST(Conv2dTest, ZeroOutGradGivesZeroGradients) {
  Tensor x = random_tensor(Shape{1, 2, 5, 5}, 4);
  Tensor w = random_tensor(Shape{3, 2, 3, 3}, 5);
  Tensor g(Shape{1, 3, 5, 5});
  LayerGrad lg = conv2d_backward(x, w, g, 1, 1);
  for (double v : lg.input_grad.data()) EXPECT_EQ(v, 0.0);
  for (double v : lg.param_grads.at("weight")) EXPECT_EQ(v, 0.0);
  for (double v : lg.param_grads.at("bias")) EXPECT_EQ(v, 0.0);
}

TEST(Conv2dTest, ScalarChainRule) {
  Tensor x(Shape{1, 1, 1, 1}, 3.0);
  Tensor w(Shape{1, 1, 1, 1}, -2.0);
  Tensor g(Shape{1, 1, 1, 1}, 1.0);
  LayerGrad lg = conv2d_backward(x, w, g, 1, 0);
  EXPECT_EQ(lg.param_grads.at("weight")[0], 3.0);
  EXPECT_EQ(lg.input_grad[0], -2.0);
  EXPECT_EQ(lg.param_grads.at("bias")[0], 1.0);
}

TEST(Conv2dTest, BackwardShapeMismatch) {
  Tensor x(Shape{1, 1, 4, 4});
  Tensor w(Shape{1, 1, 3, 3});
  Tensor g(Shape{1, 1, 4, 4});
  EXPECT_THROW((void)conv2d_backward(x, w, g, 1, 0), DimensionError);
}

TEST(Conv2dTest, BackwardMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const std::size_t stride = 1 + seed % 2;
    Tensor x = random_tensor(Shape{1, 2, 5, 5}, 100 + seed);
    Tensor w = random_tensor(Shape{3, 2, 3, 3}, 200 + seed);
    const auto b = random_vector(3, 300 + seed);
    Tensor y = conv2d_forward(x, w, b, stride, 1);
    Tensor r = random_tensor(y.shape(), 400 + seed);
    LayerGrad lg = conv2d_backward(x, w, r, stride, 1);

    auto fx = [&](std::span<const double> p) {
      Tensor xp(x.shape(), std::vector<double>(p.begin(), p.end()));
      return dot(conv2d_forward(xp, w, b, stride, 1), r);
    };
    auto fw = [&](std::span<const double> p) {
      Tensor wp(w.shape(), std::vector<double>(p.begin(), p.end()));
      return dot(conv2d_forward(x, wp, b, stride, 1), r);
    };
    auto fb = [&](std::span<const double> p) {
      return dot(conv2d_forward(x, w, p, stride, 1), r);
    };
    EXPECT_LT(oracle::max_relative_error(
                  lg.input_grad.data(), oracle::fd_gradient(fx, x.data(), kFdStep)),
              kFdTol);
    EXPECT_LT(oracle::max_relative_error(
                  lg.param_grads.at("weight"),
                  oracle::fd_gradient(fw, w.data(), kFdStep)),
              kFdTol);
    EXPECT_LT(oracle::max_relative_error(lg.param_grads.at("bias"),
                                         oracle::fd_gradient(fb, b, kFdStep)),
              kFdTol);
  }
}

TEST(LinearTest, IdentityWeightZeroBias) {
  Tensor x = random_tensor(Shape{3, 4, 1, 1}, 7);
  Tensor w(Shape{4, 4, 1, 1});
  for (std::size_t i = 0; i < 4; ++i) w[i * 4 + i] = 1.0;
  const std::vector<double> b(4, 0.0);
  EXPECT_EQ(linear_forward(x, w, b).vec(), x.vec());
}

TEST(LinearTest, ZeroWeightReturnsBiasRows) {
  Tensor x = random_tensor(Shape{2, 3, 1, 1}, 8);
  Tensor w(Shape{2, 3, 1, 1});
  const std::vector<double> b{0.5, -1.5};
  Tensor y = linear_forward(x, w, b);
  ASSERT_EQ(y.shape(), (Shape{2, 2, 1, 1}));
  EXPECT_EQ(y.vec(), (std::vector<double>{0.5, -1.5, 0.5, -1.5}));
}

TEST(LinearTest, InputWidthMismatch) {
  Tensor x(Shape{2, 3, 1, 1});
  Tensor w(Shape{2, 4, 1, 1});
  const std::vector<double> b(2, 0.0);
  EXPECT_THROW((void)linear_forward(x, w, b), DimensionError);
}

TEST(LinearTest, BackwardMatchesFiniteDifferences) {
  Tensor x = random_tensor(Shape{3, 5, 1, 1}, 9);
  Tensor w = random_tensor(Shape{4, 5, 1, 1}, 10);
  const auto b = random_vector(4, 11);
  Tensor r = random_tensor(Shape{3, 4, 1, 1}, 12);
  LayerGrad lg = linear_backward(x, w, r);
  auto fx = [&](std::span<const double> p) {
    Tensor xp(x.shape(), std::vector<double>(p.begin(), p.end()));
    return dot(linear_forward(xp, w, b), r);
  };
  auto fw = [&](std::span<const double> p) {
    Tensor wp(w.shape(), std::vector<double>(p.begin(), p.end()));
    return dot(linear_forward(x, wp, b), r);
  };
  auto fb = [&](std::span<const double> p) {
    return dot(linear_forward(x, w, p), r);
  };
  EXPECT_LT(oracle::max_relative_error(
                lg.input_grad.data(), oracle::fd_gradient(fx, x.data(), kFdStep)),
            kFdTol);
  EXPECT_LT(oracle::max_relative_error(lg.param_grads.at("weight"),
                                       oracle::fd_gradient(fw, w.data(), kFdStep)),
            kFdTol);
  EXPECT_LT(oracle::max_relative_error(lg.param_grads.at("bias"),
                                       oracle::fd_gradient(fb, b, kFdStep)),
            kFdTol);
}

TEST(ReluTest, ClampsNegatives) {
  Tensor x(Shape{1, 3, 1, 1}, std::vector<double>{-1.0, 0.0, 2.0});
  EXPECT_EQ(relu_forward(x).vec(), (std::vector<double>{0.0, 0.0, 2.0}));
}

TEST(ReluTest, BackwardMatchesFiniteDifferencesAwayFromKink) {
  Tensor x = random_tensor(Shape{2, 3, 4, 4}, 13);
  for (auto& v : x.data()) {
    if (std::abs(v) < 1e-3) v = v < 0 ? -1e-3 - 1e-4 : 1e-3 + 1e-4;
  }
  Tensor r = random_tensor(x.shape(), 14);
  Tensor g = relu_backward(x, r);
  auto f = [&](std::span<const double> p) {
    Tensor xp(x.shape(), std::vector<double>(p.begin(), p.end()));
    return dot(relu_forward(xp), r);
  };
  EXPECT_LT(oracle::max_relative_error(g.data(),
                                       oracle::fd_gradient(f, x.data(), kFdStep)),
            kFdTol);
}

TEST(MaxPoolTest, SingleWindowRoutesToMax) {
  Tensor x(Shape{1, 1, 2, 2}, std::vector<double>{1, 2, 3, 4});
  Tensor y = maxpool2x2_forward(x);
  ASSERT_EQ(y.shape(), (Shape{1, 1, 1, 1}));
  EXPECT_EQ(y[0], 4.0);
  Tensor g = maxpool2x2_backward(x, Tensor(Shape{1, 1, 1, 1}, 1.0));
  EXPECT_EQ(g.vec(), (std::vector<double>{0, 0, 0, 1}));
}

TEST(MaxPoolTest, TieGoesToFirstElement) {
  Tensor x(Shape{1, 1, 2, 2}, 5.0);
  Tensor g = maxpool2x2_backward(x, Tensor(Shape{1, 1, 1, 1}, 2.0));
  EXPECT_EQ(g.vec(), (std::vector<double>{2, 0, 0, 0}));
}

TEST(MaxPoolTest, OddSpatialDimsRejected) {
  EXPECT_THROW((void)maxpool2x2_forward(Tensor(Shape{1, 1, 3, 4})),
               DimensionError);
  EXPECT_THROW((void)maxpool2x2_forward(Tensor(Shape{1, 1, 4, 5})),
               DimensionError);
}

TEST(MaxPoolTest, BackwardMatchesFiniteDifferences) {
  // Distinct values spaced well apart keep every window's argmax stable
  // under the finite-difference probe.
  Tensor x(Shape{2, 2, 4, 4});
  Xoshiro256pp rng(15);
  std::vector<double> vals(x.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = 0.01 * static_cast<double>(i);
  for (std::size_t i = vals.size(); i > 1; --i) {
    std::swap(vals[i - 1], vals[rng.below(i)]);
  }
  for (std::size_t i = 0; i < vals.size(); ++i) x[i] = vals[i];
  Tensor r = random_tensor(Shape{2, 2, 2, 2}, 16);
  Tensor g = maxpool2x2_backward(x, r);
  auto f = [&](std::span<const double> p) {
    Tensor xp(x.shape(), std::vector<double>(p.begin(), p.end()));
    return dot(maxpool2x2_forward(xp), r);
  };
  EXPECT_LT(oracle::max_relative_error(g.data(),
                                       oracle::fd_gradient(f, x.data(), kFdStep)),
            kFdTol);
}

TEST(FlattenTest, MovesFeaturesIntoChannels) {
  Tensor x = random_tensor(Shape{2, 3, 2, 2}, 17);
  Tensor y = flatten(x);
  EXPECT_EQ(y.shape(), (Shape{2, 12, 1, 1}));
  EXPECT_EQ(y.vec(), x.vec());
}

TEST(SoftmaxCrossEntropyTest, UniformLogitsGiveLogK) {
  Tensor logits(Shape{3, 10, 1, 1});
  const std::vector<int> labels{0, 4, 9};
  EXPECT_NEAR(softmax_cross_entropy(logits, labels).loss, std::log(10.0), 1e-12);
  EXPECT_NEAR(softmax_cross_entropy(logits, labels).loss, 2.302585, 1e-6);
}

TEST(SoftmaxCrossEntropyTest, SaturatedLogitGivesZeroLoss) {
  Tensor logits(Shape{1, 10, 1, 1});
  logits[3] = 1000.0;
  const std::vector<int> labels{3};
  LossResult r = softmax_cross_entropy(logits, labels);
  EXPECT_TRUE(std::isfinite(r.loss));
  EXPECT_NEAR(r.loss, 0.0, 1e-12);
}

TEST(SoftmaxCrossEntropyTest, LabelOutOfRange) {
  Tensor logits(Shape{2, 10, 1, 1});
  EXPECT_THROW((void)softmax_cross_entropy(logits, std::vector<int>{0, 10}),
               IndexError);
  EXPECT_THROW((void)softmax_cross_entropy(logits, std::vector<int>{-1, 0}),
               IndexError);
}

TEST(SoftmaxCrossEntropyTest, GradientMatchesFiniteDifferences) {
  Tensor logits = random_tensor(Shape{4, 10, 1, 1}, 18, -3.0, 3.0);
  const std::vector<int> labels{1, 7, 7, 0};
  LossResult r = softmax_cross_entropy(logits, labels);
  auto f = [&](std::span<const double> p) {
    Tensor lp(logits.shape(), std::vector<double>(p.begin(), p.end()));
    return softmax_cross_entropy(lp, labels).loss;
  };
  EXPECT_LT(oracle::max_relative_error(
                r.logit_grad.data(), oracle::fd_gradient(f, logits.data(), kFdStep)),
            kFdTol);
}

}  // namespace
}  // namespace dua::nn
