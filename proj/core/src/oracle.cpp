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

#include "dua/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dua/error.hpp"

namespace dua::oracle {

Stats two_pass_stats(const Tensor& x) {
  const Shape& s = x.shape();
  if (s.n * s.h * s.w == 0 || s.c == 0) {
    throw DimensionError("two_pass_stats: empty tensor " + to_string(s));
  }
  const double count = static_cast<double>(s.n * s.h * s.w);
  Stats out{std::vector<double>(s.c, 0.0), std::vector<double>(s.c, 0.0)};
  for (std::size_t c = 0; c < s.c; ++c) {
    // Sum offsets from the first element: a constant channel then has an
    // exactly representable mean.
    const double pivot = x.at(0, c, 0, 0);
    double sum = 0.0;
    for (std::size_t n = 0; n < s.n; ++n)
      for (std::size_t h = 0; h < s.h; ++h)
        for (std::size_t w = 0; w < s.w; ++w) sum += x.at(n, c, h, w) - pivot;
    const double mean = pivot + sum / count;
    double dev = 0.0;
    for (std::size_t n = 0; n < s.n; ++n) {
      for (std::size_t h = 0; h < s.h; ++h) {
        for (std::size_t w = 0; w < s.w; ++w) {
          const double d = x.at(n, c, h, w) - mean;
          dev += d * d;
        }
      }
    }
    out.mean[c] = mean;
    out.var[c] = dev / count;
  }
  return out;
}

double ema_closed_form(const EmaTrace& trace) {
  const std::size_t k = trace.weights.size();
  if (trace.inputs.size() != k) {
    throw DimensionError("ema_closed_form: weights and inputs differ in length");
  }
  double decay_all = 1.0;
  for (double w : trace.weights) decay_all *= 1.0 - w;
  double total = decay_all * trace.initial;
  for (std::size_t i = 0; i < k; ++i) {
    double tail = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) tail *= 1.0 - trace.weights[j];
    total += trace.weights[i] * tail * trace.inputs[i];
  }
  return total;
}

Tensor naive_conv(const Tensor& x, const Tensor& w, std::span<const double> bias,
                  std::size_t stride, std::size_t pad) {
  const Shape& xs = x.shape();
  const Shape& ws = w.shape();
  if (xs.c != ws.c || bias.size() != ws.n || stride == 0) {
    throw DimensionError("naive_conv: incompatible arguments");
  }
  const std::size_t oh = (xs.h + 2 * pad - ws.h) / stride + 1;
  const std::size_t ow = (xs.w + 2 * pad - ws.w) / stride + 1;
  Tensor out({xs.n, ws.n, oh, ow});
  for (std::size_t n = 0; n < xs.n; ++n) {
    for (std::size_t co = 0; co < ws.n; ++co) {
      for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
          double acc = 0.0;
          for (std::size_t ci = 0; ci < ws.c; ++ci) {
            for (std::size_t ky = 0; ky < ws.h; ++ky) {
              for (std::size_t kx = 0; kx < ws.w; ++kx) {
                const long iy = static_cast<long>(oy * stride + ky) - static_cast<long>(pad);
                const long ix = static_cast<long>(ox * stride + kx) - static_cast<long>(pad);
                if (iy < 0 || ix < 0 || iy >= static_cast<long>(xs.h) ||
                    ix >= static_cast<long>(xs.w)) {
                  continue;
                }
                acc += w.at(co, ci, ky, kx) *
                       x.at(n, ci, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
              }
            }
          }
          out.at(n, co, oy, ox) = acc + bias[co];
        }
      }
    }
  }
  return out;
}

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> point, double step) {
  if (!(step > 0.0)) throw ParameterError("fd_gradient: step must be > 0");
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + step;
    const double up = f(x);
    x[i] = orig - step;
    const double down = f(x);
    x[i] = orig;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

double max_relative_error(std::span<const double> a, std::span<const double> b,
                          double floor) {
  if (a.size() != b.size()) throw DimensionError("max_relative_error: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace dua::oracle
