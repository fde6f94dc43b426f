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

#ifndef DUA_IDX_HPP_
#define DUA_IDX_HPP_

#include <filesystem>

#include "dua/dataset.hpp"

namespace dua::shift {

inline constexpr unsigned kIdxImageMagic = 0x00000803;
inline constexpr unsigned kIdxLabelMagic = 0x00000801;

/// Loads an IDX image/label pair (MNIST layout). Pixels are scaled by 1/255.
/// Throws IoError if a file cannot be read and FormatError (naming the file
/// and byte offset) on bad magic, truncated payloads or count mismatch.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

/// Writes a single-channel dataset as IDX; pixels are rounded to u8.
void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

}  // namespace dua::shift

#endif  // DUA_IDX_HPP_
