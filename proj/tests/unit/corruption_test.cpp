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

#include "dua/corruption.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dua/error.hpp"
#include "dua/synthetic.hpp"

namespace dua::shift {
namespace {

double mean_sq_distortion(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

const Dataset& images() {
  static const Dataset d = gen_synthetic(100, 123);
  return d;
}

TEST(CorruptionTest, SeverityZeroIsIdentity) {
  for (CorruptionKind k : kAllCorruptions) {
    EXPECT_EQ(corrupt(images().images, {k, 0}, 5), images().images);
  }
}

TEST(CorruptionTest, GaussianVarianceOnConstantImage) {
  const Tensor flat(Shape{1000, 1, 28, 28}, 0.5);
  for (int sev = 1; sev <= 5; ++sev) {
    const double sigma = severity_parameter(CorruptionKind::gaussian_noise, sev);
    const Tensor y = corrupt(flat, {CorruptionKind::gaussian_noise, sev}, 77);
    double m = 0.0;
    for (double v : y.data()) m += v;
    m /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y.data()) var += (v - m) * (v - m);
    var /= static_cast<double>(y.size() - 1);
    EXPECT_NEAR(var, sigma * sigma, 0.05 * sigma * sigma) << "severity " << sev;
  }
}

TEST(CorruptionTest, ZeroContrastGivesImageMean) {
  const Tensor x = slice_batch(images().images, 0, 5);
  const Tensor y = corrupt_with_parameter(x, CorruptionKind::contrast, 0.0, 1);
  for (std::size_t n = 0; n < 5; ++n) {
    double m = 0.0;
    for (double v : x.sample(n)) m += v;
    m /= static_cast<double>(x.shape().sample_size());
    for (double v : y.sample(n)) EXPECT_NEAR(v, m, 1e-15);
  }
}

TEST(CorruptionTest, OutputsStayInUnitRangeAndKeepShape) {
  for (CorruptionKind k : kAllCorruptions) {
    for (int sev = 1; sev <= 5; ++sev) {
      const Dataset y = corrupt(images(), {k, sev}, 9);
      EXPECT_EQ(y.images.shape(), images().images.shape());
      EXPECT_EQ(y.labels, images().labels);
      EXPECT_NO_THROW(y.validate()) << to_string(k) << " " << sev;
    }
  }
}

TEST(CorruptionTest, DistortionIncreasesWithSeverity) {
  for (CorruptionKind k : kAllCorruptions) {
    double prev = 0.0;
    for (int sev = 1; sev <= 5; ++sev) {
      const double d = mean_sq_distortion(corrupt(images().images, {k, sev}, 3),
                                          images().images);
      EXPECT_GT(d, prev) << to_string(k) << " severity " << sev;
      prev = d;
    }
  }
}

TEST(CorruptionTest, ReproducibleAndBatchIndependent) {
  const Tensor& x = images().images;
  const CorruptionSpec spec{CorruptionKind::shot_noise, 4};
  const Tensor a = corrupt(x, spec, 11);
  EXPECT_EQ(corrupt(x, spec, 11), a);
  EXPECT_NE(corrupt(x, spec, 12), a);
  const Tensor part = corrupt(slice_batch(x, 0, 10), spec, 11);
  EXPECT_EQ(part, slice_batch(a, 0, 10));
}

TEST(CorruptionTest, BlurOfConstantIsConstant) {
  const Tensor flat(Shape{2, 1, 28, 28}, 0.3);
  const Tensor y = corrupt(flat, {CorruptionKind::defocus_blur, 5}, 0);
  for (double v : y.data()) EXPECT_NEAR(v, 0.3, 1e-12);
}

TEST(CorruptionTest, BrightnessAddsOffset) {
  const Tensor flat(Shape{1, 1, 4, 4}, 0.2);
  const Tensor y = corrupt(flat, {CorruptionKind::brightness, 3}, 0);
  for (double v : y.data()) EXPECT_DOUBLE_EQ(v, 0.2 + 0.15);
}

TEST(CorruptionTest, ParsingAndValidation) {
  for (CorruptionKind k : kAllCorruptions) EXPECT_EQ(parse_corruption(to_string(k)), k);
  EXPECT_THROW((void)parse_corruption("fog"), ParameterError);
  EXPECT_THROW((void)corrupt(images().images, {CorruptionKind::contrast, 6}, 0),
               ParameterError);
  EXPECT_THROW((void)severity_parameter(CorruptionKind::contrast, 0), ParameterError);
}

TEST(CorruptionTest, ManifestListsEveryKind) {
  const auto j = severity_manifest();
  EXPECT_EQ(j.size(), kAllCorruptions.size());
  EXPECT_EQ(j.at("gaussian_noise").at("levels").size(), 5u);
  EXPECT_EQ(j.at("impulse_noise").at("levels")[4].get<double>(), 0.17);
}

}  // namespace
}  // namespace dua::shift
