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

#ifndef DUA_DATASET_HPP_
#define DUA_DATASET_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dua/tensor.hpp"

namespace dua::shift {

inline constexpr int kNumClasses = 10;

/// Labelled images with pixel values in [0, 1].
struct Dataset {
  Tensor images;
  std::vector<int> labels;
  std::string name;

  [[nodiscard]] std::size_t size() const { return labels.size(); }
  /// Throws FormatError if pixels leave [0, 1], labels leave [0, classes)
  /// or the counts disagree.
  void validate(int classes = kNumClasses) const;
  [[nodiscard]] Dataset subset(std::span<const std::size_t> indices) const;
  [[nodiscard]] Dataset slice(std::size_t begin, std::size_t count) const;
};

}  // namespace dua::shift

#endif  // DUA_DATASET_HPP_
