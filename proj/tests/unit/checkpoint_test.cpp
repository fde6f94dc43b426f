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

#include "dua/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>

#include "dua/error.hpp"
#include "dua/model.hpp"

namespace dua::nn {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("dua_ckpt_" + name);
}

TEST(CheckpointTest, StartsWithMagic) {
  const auto bytes = serialize(make_desk_cnn(0));
  ASSERT_GE(bytes.size(), 4u);
  EXPECT_EQ(std::memcmp(bytes.data(), "DUA1", 4), 0);
}

TEST(CheckpointTest, RoundTripIsExact) {
  Model m = make_desk_cnn(7);
  m.bn_state("bn2").running_mean[3] = 0.125;
  m.bn_state("bn3").running_var[0] = 2.5;
  EXPECT_EQ(deserialize(serialize(m)), m);

  const fs::path p = temp_path("roundtrip.dua");
  save_checkpoint(m, p);
  EXPECT_EQ(load_checkpoint(p), m);
  fs::remove(p);
}

TEST(CheckpointTest, RejectsBadMagic) {
  auto bytes = serialize(make_desk_cnn(0));
  bytes[0] = 'X';
  EXPECT_THROW((void)deserialize(bytes), FormatError);
}

TEST(CheckpointTest, RejectsTruncationAndTrailingBytes) {
  const auto bytes = serialize(make_desk_cnn(0));
  for (std::size_t cut : {std::size_t{2}, std::size_t{10}, bytes.size() / 2,
                          bytes.size() - 1}) {
    std::vector<std::uint8_t> t(bytes.begin(), bytes.begin() + cut);
    EXPECT_THROW((void)deserialize(t), FormatError) << "cut at " << cut;
  }
  auto longer = bytes;
  longer.push_back(0);
  EXPECT_THROW((void)deserialize(longer), FormatError);
}

TEST(CheckpointTest, MissingFileIsIoError) {
  EXPECT_THROW((void)load_checkpoint(temp_path("does_not_exist.dua")), IoError);
}

TEST(CheckpointTest, LayoutCoversPayload) {
  const Model m = make_desk_cnn(0);
  const auto bytes = serialize(m);
  const auto layout = checkpoint_layout(m);
  ASSERT_FALSE(layout.empty());
  std::size_t running = 0;
  for (std::size_t i = 1; i < layout.size(); ++i) {
    EXPECT_EQ(layout[i].offset, layout[i - 1].offset + layout[i - 1].length);
  }
  for (const auto& seg : layout) running += seg.running_stat ? 1 : 0;
  EXPECT_EQ(running, 2 * m.bn_count());
  EXPECT_EQ(layout.back().offset + layout.back().length, bytes.size());
}

TEST(CheckpointTest, ValuesStoredLittleEndian) {
  Model m = make_desk_cnn(0);
  m.bn_state("bn1").running_mean[0] = 1.0;
  const auto bytes = serialize(m);
  for (const auto& seg : checkpoint_layout(m)) {
    if (seg.name != "running_mean" || seg.layer != m.bn_layer_position(0)) continue;
    // 1.0 is 0x3FF0000000000000.
    EXPECT_EQ(bytes[seg.offset + 7], 0x3F);
    EXPECT_EQ(bytes[seg.offset + 6], 0xF0);
    EXPECT_EQ(bytes[seg.offset], 0x00);
  }
}

}  // namespace
}  // namespace dua::nn
