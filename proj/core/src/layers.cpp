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

#include "dua/layers.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

#include "dua/error.hpp"

namespace dua::nn {
namespace {

struct ConvGeometry {
  std::size_t c_in, c_out, kh, kw, h, w, oh, ow, stride, pad;
  [[nodiscard]] std::size_t patch() const { return c_in * kh * kw; }
  [[nodiscard]] std::size_t positions() const { return oh * ow; }
};

ConvGeometry conv_geometry(const Shape& xs, const Shape& ws, std::size_t stride,
                           std::size_t pad) {
  if (stride == 0) throw ParameterError("conv2d: stride must be >= 1");
  if (ws.c != xs.c) {
    throw DimensionError("conv2d: input channel axis (" + std::to_string(xs.c) +
                         ") does not match weight c_in axis (" +
                         std::to_string(ws.c) + ")");
  }
  if (ws.h == 0 || ws.w == 0 || ws.n == 0) {
    throw DimensionError("conv2d: empty kernel " + to_string(ws));
  }
  if (xs.h + 2 * pad < ws.h || xs.w + 2 * pad < ws.w) {
    throw DimensionError("conv2d: kernel " + std::to_string(ws.h) + "x" +
                         std::to_string(ws.w) + " exceeds padded input height/width " +
                         std::to_string(xs.h + 2 * pad) + "x" +
                         std::to_string(xs.w + 2 * pad));
  }
  ConvGeometry g{};
  g.c_in = xs.c;
  g.c_out = ws.n;
  g.kh = ws.h;
  g.kw = ws.w;
  g.h = xs.h;
  g.w = xs.w;
  g.stride = stride;
  g.pad = pad;
  g.oh = (xs.h + 2 * pad - ws.h) / stride + 1;
  g.ow = (xs.w + 2 * pad - ws.w) / stride + 1;
  return g;
}

// col[k][p] with k = (ci, ky, kx) and p = (oy, ox); out-of-bounds taps are 0.
void im2col(const double* img, const ConvGeometry& g, double* col) {
  const std::size_t P = g.positions();
  std::size_t k = 0;
  for (std::size_t ci = 0; ci < g.c_in; ++ci) {
    const double* plane = img + ci * g.h * g.w;
    for (std::size_t ky = 0; ky < g.kh; ++ky) {
      for (std::size_t kx = 0; kx < g.kw; ++kx, ++k) {
        double* row = col + k * P;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) -
                                    static_cast<std::ptrdiff_t>(g.pad);
          double* dst = row + oy * g.ow;
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) {
            std::fill(dst, dst + g.ow, 0.0);
            continue;
          }
          const double* src = plane + static_cast<std::size_t>(iy) * g.w;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) -
                                      static_cast<std::ptrdiff_t>(g.pad);
            dst[ox] = (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w))
                          ? 0.0
                          : src[static_cast<std::size_t>(ix)];
          }
        }
      }
    }
  }
}

void col2im_add(const double* col, const ConvGeometry& g, double* img) {
  const std::size_t P = g.positions();
  std::size_t k = 0;
  for (std::size_t ci = 0; ci < g.c_in; ++ci) {
    double* plane = img + ci * g.h * g.w;
    for (std::size_t ky = 0; ky < g.kh; ++ky) {
      for (std::size_t kx = 0; kx < g.kw; ++kx, ++k) {
        const double* row = col + k * P;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) -
                                    static_cast<std::ptrdiff_t>(g.pad);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
          double* dst = plane + static_cast<std::size_t>(iy) * g.w;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) -
                                      static_cast<std::ptrdiff_t>(g.pad);
            if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) continue;
            dst[static_cast<std::size_t>(ix)] += row[oy * g.ow + ox];
          }
        }
      }
    }
  }
}

// Four doubles per lane group; element-wise arithmetic only, so each output
// keeps its own sequential summation order.
typedef double v4d __attribute__((vector_size(32)));

inline v4d load4(const double* p) {
  v4d v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void store4(double* p, v4d v) { std::memcpy(p, &v, sizeof v); }

// C[m][n] = (sum_k A[m][k] * B[k][n], k ascending from 0.0) + bias[m];
// a null bias adds nothing.
// The register tile only changes which elements are in flight, never the
// per-element summation order.
void gemm_bias(const double* A, std::size_t M, std::size_t K, const double* B,
               std::size_t N, const double* bias, double* C) {
  constexpr std::size_t TM = 4;
  constexpr std::size_t TN = 8;
  std::size_t m = 0;
  for (; m + TM <= M; m += TM) {
    const double* a0 = A + (m + 0) * K;
    const double* a1 = A + (m + 1) * K;
    const double* a2 = A + (m + 2) * K;
    const double* a3 = A + (m + 3) * K;
    std::size_t n = 0;
    for (; n + TN <= N; n += TN) {
      v4d c00 = {}, c01 = {}, c10 = {}, c11 = {}, c20 = {}, c21 = {}, c30 = {}, c31 = {};
      const double* b = B + n;
      for (std::size_t k = 0; k < K; ++k, b += N) {
        const v4d b0 = load4(b), b1 = load4(b + 4);
        const v4d w0 = {a0[k], a0[k], a0[k], a0[k]};
        const v4d w1 = {a1[k], a1[k], a1[k], a1[k]};
        const v4d w2 = {a2[k], a2[k], a2[k], a2[k]};
        const v4d w3 = {a3[k], a3[k], a3[k], a3[k]};
        c00 += w0 * b0;
        c01 += w0 * b1;
        c10 += w1 * b0;
        c11 += w1 * b1;
        c20 += w2 * b0;
        c21 += w2 * b1;
        c30 += w3 * b0;
        c31 += w3 * b1;
      }
      const v4d* rows[4][2] = {{&c00, &c01}, {&c10, &c11}, {&c20, &c21}, {&c30, &c31}};
      for (std::size_t i = 0; i < TM; ++i) {
        const double bi = bias != nullptr ? bias[m + i] : 0.0;
        const v4d bv = {bi, bi, bi, bi};
        store4(C + (m + i) * N + n, *rows[i][0] + bv);
        store4(C + (m + i) * N + n + 4, *rows[i][1] + bv);
      }
    }
    for (; n < N; ++n) {
      for (std::size_t i = 0; i < TM; ++i) {
        const double* a = A + (m + i) * K;
        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) acc += a[k] * B[k * N + n];
        C[(m + i) * N + n] = bias != nullptr ? acc + bias[m + i] : acc;
      }
    }
  }
  for (; m < M; ++m) {
    const double* a = A + m * K;
    for (std::size_t n = 0; n < N; ++n) {
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) acc += a[k] * B[k * N + n];
      C[m * N + n] = bias != nullptr ? acc + bias[m] : acc;
    }
  }
}

std::vector<double> transpose(const double* a, std::size_t rows, std::size_t cols) {
  std::vector<double> t(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = a[r * cols + c];
  return t;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(what) + ": gradient shape " +
                         to_string(b.shape()) + " does not match " +
                         to_string(a.shape()));
  }
}

}  // namespace

Tensor conv2d_forward(const Tensor& x, const Tensor& weight,
                      std::span<const double> bias, std::size_t stride,
                      std::size_t pad) {
  const ConvGeometry g = conv_geometry(x.shape(), weight.shape(), stride, pad);
  if (bias.size() != g.c_out) {
    throw DimensionError("conv2d: bias length " + std::to_string(bias.size()) +
                         " does not match c_out axis " + std::to_string(g.c_out));
  }
  const std::size_t n = x.shape().n;
  const std::size_t K = g.patch();
  const std::size_t P = g.positions();
  Tensor out({n, g.c_out, g.oh, g.ow});
  std::vector<double> col(K * P);
  const std::size_t in_len = x.shape().sample_size();
  const std::size_t out_len = g.c_out * P;
  for (std::size_t i = 0; i < n; ++i) {
    im2col(x.data().data() + i * in_len, g, col.data());
    gemm_bias(weight.data().data(), g.c_out, K, col.data(), P, bias.data(),
              out.data().data() + i * out_len);
  }
  return out;
}

LayerGrad conv2d_backward(const Tensor& x, const Tensor& weight,
                          const Tensor& out_grad, std::size_t stride,
                          std::size_t pad) {
  const ConvGeometry g = conv_geometry(x.shape(), weight.shape(), stride, pad);
  const std::size_t n = x.shape().n;
  const Shape expect{n, g.c_out, g.oh, g.ow};
  if (out_grad.shape() != expect) {
    throw DimensionError("conv2d_backward: out_grad shape " +
                         to_string(out_grad.shape()) + " does not match output " +
                         to_string(expect));
  }
  const std::size_t K = g.patch();
  const std::size_t P = g.positions();
  const std::size_t in_len = x.shape().sample_size();
  const std::size_t out_len = g.c_out * P;

  LayerGrad grads;
  grads.input_grad = Tensor(x.shape());
  std::vector<double> dw(g.c_out * K, 0.0);
  std::vector<double> db(g.c_out, 0.0);
  std::vector<double> col(K * P);
  std::vector<double> dcol(K * P);
  const double* wdata = weight.data().data();

  const std::vector<double> wt = transpose(wdata, g.c_out, K);
  std::vector<double> dw_i(g.c_out * K);
  for (std::size_t i = 0; i < n; ++i) {
    const double* dout = out_grad.data().data() + i * out_len;
    im2col(x.data().data() + i * in_len, g, col.data());
    for (std::size_t co = 0; co < g.c_out; ++co) {
      const double* drow = dout + co * P;
      double bsum = 0.0;
      for (std::size_t p = 0; p < P; ++p) bsum += drow[p];
      db[co] += bsum;
    }
    // dW += dout * col^T ; dcol = W^T * dout
    const std::vector<double> col_t = transpose(col.data(), K, P);
    gemm_bias(dout, g.c_out, P, col_t.data(), K, nullptr, dw_i.data());
    for (std::size_t j = 0; j < dw.size(); ++j) dw[j] += dw_i[j];
    gemm_bias(wt.data(), K, g.c_out, dout, P, nullptr, dcol.data());
    col2im_add(dcol.data(), g, grads.input_grad.data().data() + i * in_len);
  }
  grads.param_grads["weight"] = std::move(dw);
  grads.param_grads["bias"] = std::move(db);
  return grads;
}

Tensor linear_forward(const Tensor& x, const Tensor& weight,
                      std::span<const double> bias) {
  const std::size_t n = x.shape().n;
  const std::size_t d = x.shape().sample_size();
  const std::size_t d_out = weight.shape().n;
  if (weight.shape().sample_size() != d) {
    throw DimensionError("linear: input feature axis (" + std::to_string(d) +
                         ") does not match weight column axis (" +
                         std::to_string(weight.shape().sample_size()) + ")");
  }
  if (bias.size() != d_out) {
    throw DimensionError("linear: bias length " + std::to_string(bias.size()) +
                         " does not match output axis " + std::to_string(d_out));
  }
  // out^T = W * x^T, summed over features in ascending order.
  const std::vector<double> xt = transpose(x.data().data(), n, d);
  std::vector<double> out_t(d_out * n);
  gemm_bias(weight.data().data(), d_out, d, xt.data(), n, bias.data(), out_t.data());
  return Tensor({n, d_out, 1, 1}, transpose(out_t.data(), d_out, n));
}

LayerGrad linear_backward(const Tensor& x, const Tensor& weight,
                          const Tensor& out_grad) {
  const std::size_t n = x.shape().n;
  const std::size_t d = x.shape().sample_size();
  const std::size_t d_out = weight.shape().n;
  if (weight.shape().sample_size() != d) {
    throw DimensionError("linear_backward: input feature axis does not match weight");
  }
  if (out_grad.shape().n != n || out_grad.shape().sample_size() != d_out) {
    throw DimensionError("linear_backward: out_grad shape " +
                         to_string(out_grad.shape()) + " does not match (n, d_out)");
  }
  LayerGrad grads;
  grads.input_grad = Tensor(x.shape());
  std::vector<double> dw(d_out * d);
  std::vector<double> db(d_out, 0.0);
  const double* gdata = out_grad.data().data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t o = 0; o < d_out; ++o) db[o] += gdata[i * d_out + o];
  // dx = dout * W ; dW = dout^T * x
  gemm_bias(gdata, n, d_out, weight.data().data(), d, nullptr,
            grads.input_grad.data().data());
  const std::vector<double> gt = transpose(gdata, n, d_out);
  gemm_bias(gt.data(), d_out, n, x.data().data(), d, nullptr, dw.data());
  grads.param_grads["weight"] = std::move(dw);
  grads.param_grads["bias"] = std::move(db);
  return grads;
}

Tensor relu_forward(const Tensor& x) {
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
  return out;
}

void relu_inplace(Tensor& x) {
  for (double& v : x.data()) v = v > 0.0 ? v : 0.0;
}

Tensor relu_backward(const Tensor& x, const Tensor& out_grad) {
  require_same_shape(x, out_grad, "relu_backward");
  Tensor dx(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > 0.0 ? out_grad[i] : 0.0;
  return dx;
}

namespace {

void check_pool_input(const Shape& s) {
  if (s.h % 2 != 0 || s.w % 2 != 0) {
    throw DimensionError("maxpool2x2: spatial axes h=" + std::to_string(s.h) +
                         ", w=" + std::to_string(s.w) + " must both be even");
  }
}

// Flat index of the window maximum; strict comparison keeps the first one.
std::size_t window_argmax(const Tensor& x, std::size_t base, std::size_t w) {
  const std::size_t cand[4] = {base, base + 1, base + w, base + w + 1};
  std::size_t best = cand[0];
  for (std::size_t i = 1; i < 4; ++i) {
    if (x[cand[i]] > x[best]) best = cand[i];
  }
  return best;
}

}  // namespace

Tensor maxpool2x2_forward(const Tensor& x) {
  const Shape& s = x.shape();
  check_pool_input(s);
  const std::size_t oh = s.h / 2, ow = s.w / 2;
  Tensor out({s.n, s.c, oh, ow});
  std::size_t o = 0;
  for (std::size_t nc = 0; nc < s.n * s.c; ++nc) {
    const std::size_t plane = nc * s.h * s.w;
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t xx = 0; xx < ow; ++xx, ++o) {
        out[o] = x[window_argmax(x, plane + 2 * y * s.w + 2 * xx, s.w)];
      }
    }
  }
  return out;
}

Tensor maxpool2x2_backward(const Tensor& x, const Tensor& out_grad) {
  const Shape& s = x.shape();
  check_pool_input(s);
  const std::size_t oh = s.h / 2, ow = s.w / 2;
  if (out_grad.shape() != Shape{s.n, s.c, oh, ow}) {
    throw DimensionError("maxpool2x2_backward: out_grad shape " +
                         to_string(out_grad.shape()) + " does not match pooled input");
  }
  Tensor dx(s);
  std::size_t o = 0;
  for (std::size_t nc = 0; nc < s.n * s.c; ++nc) {
    const std::size_t plane = nc * s.h * s.w;
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t xx = 0; xx < ow; ++xx, ++o) {
        dx[window_argmax(x, plane + 2 * y * s.w + 2 * xx, s.w)] += out_grad[o];
      }
    }
  }
  return dx;
}

Tensor flatten(const Tensor& x) {
  const Shape& s = x.shape();
  return x.reshaped({s.n, s.sample_size(), 1, 1});
}

}  // namespace dua::nn
