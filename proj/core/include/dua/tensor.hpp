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

#ifndef DUA_TENSOR_HPP_
#define DUA_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dua {

/// Extent of a dense NCHW tensor.
struct Shape {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t h = 0;
  std::size_t w = 0;

  [[nodiscard]] std::size_t numel() const { return n * c * h * w; }
  /// Elements in one sample (c * h * w).
  [[nodiscard]] std::size_t sample_size() const { return c * h * w; }
  [[nodiscard]] std::size_t plane() const { return h * w; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

/// Dense row-major 4-D array of doubles.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  /// Takes ownership of `data`; throws DimensionError if its length does
  /// not match the shape.
  Tensor(Shape shape, std::vector<double> data);

  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  [[nodiscard]] std::span<double> data() { return data_; }
  [[nodiscard]] std::span<const double> data() const { return data_; }
  [[nodiscard]] const std::vector<double>& vec() const { return data_; }

  [[nodiscard]] std::size_t index(std::size_t n, std::size_t c, std::size_t h,
                                  std::size_t w) const {
    return ((n * shape_.c + c) * shape_.h + h) * shape_.w + w;
  }
  double& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return data_[index(n, c, h, w)];
  }
  [[nodiscard]] double at(std::size_t n, std::size_t c, std::size_t h,
                          std::size_t w) const {
    return data_[index(n, c, h, w)];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// Contiguous view of sample `i`.
  [[nodiscard]] std::span<const double> sample(std::size_t i) const;
  [[nodiscard]] std::span<double> sample(std::size_t i);

  /// Same data, new shape with identical element count.
  [[nodiscard]] Tensor reshaped(Shape shape) const&;
  [[nodiscard]] Tensor reshaped(Shape shape) &&;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_{};
  std::vector<double> data_;
};

/// Samples [begin, begin + count) as a new tensor.
Tensor slice_batch(const Tensor& x, std::size_t begin, std::size_t count);

/// Samples at `indices`, in that order.
Tensor gather_batch(const Tensor& x, std::span<const std::size_t> indices);

/// Throws NumericError naming `where` if any element is NaN or infinite.
void check_finite(const Tensor& x, const char* where);

}  // namespace dua

#endif  // DUA_TENSOR_HPP_
