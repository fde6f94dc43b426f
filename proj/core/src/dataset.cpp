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

#include "dua/dataset.hpp"

#include <string>

#include "dua/error.hpp"

namespace dua::shift {

void Dataset::validate(int classes) const {
  if (images.shape().n != labels.size()) {
    throw FormatError(name + ": " + std::to_string(images.shape().n) + " images but " +
                      std::to_string(labels.size()) + " labels");
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!(images[i] >= 0.0 && images[i] <= 1.0)) {
      throw FormatError(name + ": pixel " + std::to_string(i) + " outside [0, 1]");
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= classes) {
      throw FormatError(name + ": label " + std::to_string(labels[i]) + " at index " +
                        std::to_string(i) + " outside [0, " + std::to_string(classes) +
                        ")");
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.images = gather_batch(images, indices);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels.at(i));
  out.name = name;
  return out;
}

Dataset Dataset::slice(std::size_t begin, std::size_t count) const {
  Dataset out;
  out.images = slice_batch(images, begin, count);
  out.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(begin),
                    labels.begin() + static_cast<std::ptrdiff_t>(begin + count));
  out.name = name;
  return out;
}

}  // namespace dua::shift
