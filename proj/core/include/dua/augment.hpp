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

#ifndef DUA_AUGMENT_HPP_
#define DUA_AUGMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dua/rng.hpp"
#include "dua/tensor.hpp"

namespace dua::shift {

/// Set of label-preserving geometric augmentations. None of them is a
/// corruption kind.
struct AugmentSet {
  bool hflip = false;
  bool crop = false;    ///< reflect-pad by kCropPad then crop back
  bool rot90s = false;  ///< rotation by 0, 90, 180 or 270 degrees

  static AugmentSet all() { return {true, true, true}; }
  static AugmentSet none() { return {}; }
  [[nodiscard]] bool empty() const { return !hflip && !crop && !rot90s; }
  /// Names in canonical order, e.g. {"hflip", "crop", "rot90s"}.
  [[nodiscard]] std::vector<std::string> names() const;
  /// Throws ParameterError on an unknown name.
  static AugmentSet parse(const std::vector<std::string>& names);

  friend bool operator==(const AugmentSet&, const AugmentSet&) = default;
};

inline constexpr std::size_t kCropPad = 4;

/// Transforms applied to one batch item, in application order:
/// crop shift, then horizontal flip, then rotation.
struct AugmentRecord {
  int shift_y = 0;  ///< crop offset minus kCropPad, in [-4, 4]
  int shift_x = 0;
  bool flipped = false;
  int quarter_turns = 0;  ///< counter-clockwise, 0..3
};

struct AugmentedBatch {
  Tensor tensor;  ///< (B, C, H, W)
  std::vector<AugmentRecord> provenance;
  /// Set when the augmentation set is empty and B > 1: every item is a copy.
  bool degenerate = false;
};

/// B independently augmented copies of a single sample (1, C, H, W).
/// rot90s requires H == W.
AugmentedBatch augment_batch(const Tensor& sample, std::size_t batch_size,
                             const AugmentSet& augs, Xoshiro256pp& rng);

/// Individual transforms on a single sample.
Tensor hflip(const Tensor& sample);
Tensor rotate90(const Tensor& sample, int quarter_turns);
/// out(y, x) = in(y + shift_y, x + shift_x), reflecting indices that fall
/// outside the image.
Tensor shift_crop(const Tensor& sample, int shift_y, int shift_x);
Tensor apply_record(const Tensor& sample, const AugmentRecord& rec);

}  // namespace dua::shift

#endif  // DUA_AUGMENT_HPP_
