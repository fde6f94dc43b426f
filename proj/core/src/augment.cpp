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

#include "dua/augment.hpp"

#include <cstdlib>
#include <algorithm>
#include <string>

#include "dua/error.hpp"

namespace dua::shift {

std::vector<std::string> AugmentSet::names() const {
  std::vector<std::string> out;
  if (hflip) out.emplace_back("hflip");
  if (crop) out.emplace_back("crop");
  if (rot90s) out.emplace_back("rot90s");
  return out;
}

AugmentSet AugmentSet::parse(const std::vector<std::string>& names) {
  AugmentSet s;
  for (const auto& n : names) {
    if (n == "hflip") {
      s.hflip = true;
    } else if (n == "crop") {
      s.crop = true;
    } else if (n == "rot90s") {
      s.rot90s = true;
    } else {
      throw ParameterError("unknown augmentation '" + n +
                           "' (expected hflip, crop or rot90s)");
    }
  }
  return s;
}

namespace {

void require_single(const Tensor& sample, const char* what) {
  if (sample.shape().n != 1) {
    throw DimensionError(std::string(what) + ": expected a single sample, batch axis n=" +
                         std::to_string(sample.shape().n));
  }
}

}  // namespace

Tensor hflip(const Tensor& sample) {
  require_single(sample, "hflip");
  const Shape& s = sample.shape();
  Tensor out(s);
  for (std::size_t c = 0; c < s.c; ++c)
    for (std::size_t y = 0; y < s.h; ++y)
      for (std::size_t x = 0; x < s.w; ++x) out.at(0, c, y, x) = sample.at(0, c, y, s.w - 1 - x);
  return out;
}

Tensor rotate90(const Tensor& sample, int quarter_turns) {
  require_single(sample, "rotate90");
  const Shape& s = sample.shape();
  if (s.h != s.w) {
    throw DimensionError("rotate90: height axis " + std::to_string(s.h) +
                         " differs from width axis " + std::to_string(s.w));
  }
  const int q = ((quarter_turns % 4) + 4) % 4;
  const std::size_t n = s.w;
  Tensor out(s);
  for (std::size_t c = 0; c < s.c; ++c) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < n; ++x) {
        double v = 0.0;
        switch (q) {
          case 0: v = sample.at(0, c, y, x); break;
          case 1: v = sample.at(0, c, x, n - 1 - y); break;
          case 2: v = sample.at(0, c, n - 1 - y, n - 1 - x); break;
          default: v = sample.at(0, c, n - 1 - x, y); break;
        }
        out.at(0, c, y, x) = v;
      }
    }
  }
  return out;
}

Tensor shift_crop(const Tensor& sample, int shift_y, int shift_x) {
  require_single(sample, "shift_crop");
  const Shape& s = sample.shape();
  const auto h = static_cast<int>(s.h), w = static_cast<int>(s.w);
  if (std::abs(shift_y) >= h || std::abs(shift_x) >= w) {
    throw ParameterError("shift_crop: shift must be smaller than the image");
  }
  // Mirror about the edge pixel (no repeat), so the border keeps the
  // image's own texture and noise.
  auto reflect = [](int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * (n - 1) - i;
    return i;
  };
  Tensor out(s);
  for (std::size_t c = 0; c < s.c; ++c) {
    for (int y = 0; y < h; ++y) {
      const auto sy = static_cast<std::size_t>(reflect(y + shift_y, h));
      for (int x = 0; x < w; ++x) {
        const auto sx = static_cast<std::size_t>(reflect(x + shift_x, w));
        out.at(0, c, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) =
            sample.at(0, c, sy, sx);
      }
    }
  }
  return out;
}

Tensor apply_record(const Tensor& sample, const AugmentRecord& rec) {
  Tensor t = sample;
  if (rec.shift_y != 0 || rec.shift_x != 0) t = shift_crop(t, rec.shift_y, rec.shift_x);
  if (rec.flipped) t = hflip(t);
  if (rec.quarter_turns != 0) t = rotate90(t, rec.quarter_turns);
  return t;
}

AugmentedBatch augment_batch(const Tensor& sample, std::size_t batch_size,
                             const AugmentSet& augs, Xoshiro256pp& rng) {
  require_single(sample, "augment_batch");
  if (batch_size == 0) throw ParameterError("augment_batch: batch size must be >= 1");
  const Shape& s = sample.shape();
  if (augs.rot90s && s.h != s.w) {
    throw DimensionError("augment_batch: rot90s needs equal height and width axes");
  }
  AugmentedBatch out;
  out.tensor = Tensor({batch_size, s.c, s.h, s.w});
  out.provenance.resize(batch_size);
  out.degenerate = augs.empty() && batch_size > 1;
  constexpr auto span = static_cast<std::uint64_t>(2 * kCropPad + 1);
  for (std::size_t b = 0; b < batch_size; ++b) {
    AugmentRecord& rec = out.provenance[b];
    if (augs.crop) {
      rec.shift_y = static_cast<int>(rng.below(span)) - static_cast<int>(kCropPad);
      rec.shift_x = static_cast<int>(rng.below(span)) - static_cast<int>(kCropPad);
    }
    if (augs.hflip) rec.flipped = rng.below(2) == 1;
    if (augs.rot90s) rec.quarter_turns = static_cast<int>(rng.below(4));
    const Tensor item = apply_record(sample, rec);
    std::copy(item.data().begin(), item.data().end(), out.tensor.sample(b).begin());
  }
  return out;
}

}  // namespace dua::shift
