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

#include "dua/synthetic.hpp"

#include <array>

#include <gtest/gtest.h>

#include "dua/error.hpp"

namespace dua::shift {
namespace {

TEST(SyntheticTest, SameSeedIsBitIdentical) {
  const Dataset a = gen_synthetic(200, 17);
  const Dataset b = gen_synthetic(200, 17);
  EXPECT_EQ(a.images, b.images);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(gen_synthetic(200, 18).images, a.images);
}

TEST(SyntheticTest, ClassHistogramUniform) {
  const Dataset d = gen_synthetic(10000, 3);
  std::array<int, kNumClasses> counts{};
  for (int l : d.labels) ++counts.at(static_cast<std::size_t>(l));
  for (int c : counts) {
    EXPECT_GE(c, 950);
    EXPECT_LE(c, 1050);
  }
}

TEST(SyntheticTest, ShapeAndRange) {
  const Dataset d = gen_synthetic(50, 1);
  EXPECT_EQ(d.images.shape(), (Shape{50, 1, 28, 28}));
  EXPECT_NO_THROW(d.validate());
}

TEST(SyntheticTest, PrefixIndependentOfSize) {
  const Dataset small = gen_synthetic(20, 9);
  const Dataset large = gen_synthetic(60, 9);
  EXPECT_EQ(small.images, slice_batch(large.images, 0, 20));
}

TEST(SyntheticTest, SamplesOfAClassVary) {
  const Dataset d = gen_synthetic(30, 2);
  // Items 0, 10 and 20 share a class but have jittered renderings.
  EXPECT_FALSE(std::equal(d.images.sample(0).begin(), d.images.sample(0).end(),
                          d.images.sample(10).begin()));
  EXPECT_EQ(d.labels[0], d.labels[10]);
}

TEST(SyntheticTest, EmptyRequestRejected) {
  EXPECT_THROW((void)gen_synthetic(0, 0), ParameterError);
}

}  // namespace
}  // namespace dua::shift
