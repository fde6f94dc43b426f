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

#ifndef DUA_SYNTHETIC_HPP_
#define DUA_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "dua/dataset.hpp"

namespace dua::shift {

/// 28x28 single-channel glyphs of ten stroke-based classes with jittered
/// position, scale, rotation, thickness and intensity. Classes cycle so the
/// label histogram is balanced; sample i depends only on (seed, i).
Dataset gen_synthetic(std::size_t n, std::uint64_t seed);

}  // namespace dua::shift

#endif  // DUA_SYNTHETIC_HPP_
