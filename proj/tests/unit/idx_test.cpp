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

#include "dua/idx.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>

#include "dua/error.hpp"

namespace dua::shift {
namespace {

namespace fs = std::filesystem;

class IdxTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dua_idx_" + std::string(::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& b) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(b.data()),
              static_cast<std::streamsize>(b.size()));
  }

  static std::vector<std::uint8_t> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  // Two 2x3 images and their labels, written by hand.
  void write_tiny(std::size_t drop_payload = 0, std::uint8_t img_magic = 0x03) {
    std::vector<std::uint8_t> img{0, 0, 8, img_magic, 0, 0, 0, 2,
                                  0, 0, 0, 2,         0, 0, 0, 3};
    for (int i = 0; i < 12; ++i) img.push_back(static_cast<std::uint8_t>(i * 20));
    img.resize(img.size() - drop_payload);
    write_bytes(images(), img);
    write_bytes(labels(), {0, 0, 8, 1, 0, 0, 0, 2, 7, 3});
  }

  fs::path images() const { return dir_ / "img-idx3-ubyte"; }
  fs::path labels() const { return dir_ / "lab-idx1-ubyte"; }

  fs::path dir_;
};

TEST_F(IdxTest, ParsesHandWrittenFiles) {
  write_tiny();
  Dataset d = load_idx(images(), labels());
  ASSERT_EQ(d.images.shape(), (Shape{2, 1, 2, 3}));
  EXPECT_EQ(d.labels, (std::vector<int>{7, 3}));
  EXPECT_EQ(d.images.at(1, 0, 1, 2), 220.0 / 255.0);
  EXPECT_NO_THROW(d.validate());
}

TEST_F(IdxTest, TruncatedPayloadIsFormatError) {
  write_tiny(1);
  EXPECT_THROW((void)load_idx(images(), labels()), FormatError);
}

TEST_F(IdxTest, BadMagicIsFormatError) {
  write_tiny(0, 0x02);
  EXPECT_THROW((void)load_idx(images(), labels()), FormatError);
}

TEST_F(IdxTest, MissingFileIsIoError) {
  EXPECT_THROW((void)load_idx(dir_ / "nope", dir_ / "nope2"), IoError);
}

TEST_F(IdxTest, RoundTripIsBitIdentical) {
  Dataset d;
  d.images = Tensor(Shape{3, 1, 4, 5});
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    d.images[i] = static_cast<double>((i * 37) % 256) / 255.0;
  }
  d.labels = {4, 0, 9};
  write_idx(d, images(), labels());
  Dataset back = load_idx(images(), labels());
  EXPECT_EQ(back.images, d.images);
  EXPECT_EQ(back.labels, d.labels);

  const auto first = read_bytes(images());
  write_idx(back, images(), labels());
  EXPECT_EQ(read_bytes(images()), first);
  EXPECT_EQ(first[3], 0x03);
  EXPECT_EQ(first.size(), 16u + 60u);
}

TEST_F(IdxTest, WriteRejectsMultiChannel) {
  Dataset d;
  d.images = Tensor(Shape{1, 2, 2, 2});
  d.labels = {0};
  EXPECT_THROW(write_idx(d, images(), labels()), DimensionError);
}

// Uses the canonical files when present (DUA_MNIST_DIR or data/mnist).
TEST(MnistTest, CanonicalTestSet) {
  const char* env = std::getenv("DUA_MNIST_DIR");
  const fs::path dir = env != nullptr ? fs::path(env) : fs::path("data/mnist");
  const fs::path img = dir / "t10k-images-idx3-ubyte";
  const fs::path lab = dir / "t10k-labels-idx1-ubyte";
  if (!fs::exists(img) || !fs::exists(lab)) GTEST_SKIP() << "MNIST not available";
  Dataset d = load_idx(img, lab);
  EXPECT_EQ(d.size(), 10000u);
  EXPECT_EQ(d.images.shape(), (Shape{10000, 1, 28, 28}));
}

}  // namespace
}  // namespace dua::shift
