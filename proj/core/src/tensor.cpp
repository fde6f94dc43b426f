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

#include "dua/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dua/error.hpp"

namespace dua {

std::string to_string(const Shape& s) {
  return "(" + std::to_string(s.n) + ", " + std::to_string(s.c) + ", " +
         std::to_string(s.h) + ", " + std::to_string(s.w) + ")";
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(shape), data_(shape.numel(), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.numel()) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match shape " + to_string(shape_));
  }
}

std::span<const double> Tensor::sample(std::size_t i) const {
  const std::size_t len = shape_.sample_size();
  return std::span<const double>(data_).subspan(i * len, len);
}

std::span<double> Tensor::sample(std::size_t i) {
  const std::size_t len = shape_.sample_size();
  return std::span<double>(data_).subspan(i * len, len);
}

Tensor Tensor::reshaped(Shape shape) const& {
  return Tensor(*this).reshaped(shape);
}

Tensor Tensor::reshaped(Shape shape) && {
  if (shape.numel() != shape_.numel()) {
    throw DimensionError("cannot reshape " + to_string(shape_) + " to " +
                         to_string(shape));
  }
  shape_ = shape;
  return std::move(*this);
}

Tensor slice_batch(const Tensor& x, std::size_t begin, std::size_t count) {
  const Shape& s = x.shape();
  if (begin + count > s.n) {
    throw DimensionError("batch slice [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") exceeds n=" +
                         std::to_string(s.n));
  }
  const std::size_t len = s.sample_size();
  auto first = x.vec().begin() + static_cast<std::ptrdiff_t>(begin * len);
  return Tensor({count, s.c, s.h, s.w},
                std::vector<double>(first, first + static_cast<std::ptrdiff_t>(count * len)));
}

Tensor gather_batch(const Tensor& x, std::span<const std::size_t> indices) {
  const Shape& s = x.shape();
  Tensor out({indices.size(), s.c, s.h, s.w});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= s.n) {
      throw DimensionError("gather index " + std::to_string(indices[i]) +
                           " out of range for n=" + std::to_string(s.n));
    }
    auto src = x.sample(indices[i]);
    std::copy(src.begin(), src.end(), out.sample(i).begin());
  }
  return out;
}

void check_finite(const Tensor& x, const char* where) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw NumericError(std::string(where) + ": non-finite value at flat index " +
                         std::to_string(i));
    }
  }
}

}  // namespace dua
