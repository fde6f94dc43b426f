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

#ifndef DUA_CHECKPOINT_HPP_
#define DUA_CHECKPOINT_HPP_

// Binary checkpoint ("DUA1"):
//
//   magic      4 bytes  "DUA1"
//   u32        layer count L
//   u32 x 3    input c, h, w
//   L records  u8 type tag, u32 shape-int count, that many u32 shape ints
//   payload    f64 arrays in layer order
//
// Tags and shape ints:
//   1 conv     c_out c_in kh kw stride pad   payload: weight, bias
//   2 bn       channels                      payload: gamma, beta,
//                                            running_mean, running_var,
//                                            [eps, train_momentum]
//   3 relu, 4 maxpool2x2, 5 flatten          (no shape ints, no payload)
//   6 linear   d_out d_in                    payload: weight, bias
//
// All integers and floats are little-endian. BN layers are named bn1..bnN
// in order on load.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dua/model.hpp"

namespace dua::nn {

std::vector<std::uint8_t> serialize(const Model& model);
/// Throws FormatError on bad magic, unknown tags, inconsistent shapes or
/// truncated/overlong payloads.
Model deserialize(std::span<const std::uint8_t> bytes);

void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

/// Byte range of one array inside a serialized checkpoint.
struct CheckpointSegment {
  std::size_t layer = 0;
  std::string name;  ///< e.g. "weight", "running_mean", "bn_scalars"
  bool running_stat = false;  ///< true for running_mean / running_var
  std::size_t offset = 0;
  std::size_t length = 0;
};

/// Payload layout of `serialize(model)`.
std::vector<CheckpointSegment> checkpoint_layout(const Model& model);

}  // namespace dua::nn

#endif  // DUA_CHECKPOINT_HPP_
