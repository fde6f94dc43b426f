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

#include "dua/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dua/error.hpp"

namespace dua::nn {
namespace {

constexpr char kMagic[4] = {'D', 'U', 'A', '1'};

enum Tag : std::uint8_t {
  kConv = 1,
  kBatchNorm = 2,
  kRelu = 3,
  kMaxPool = 4,
  kFlatten = 5,
  kLinear = 6,
};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint64_t v) {
    if (v > 0xffffffffULL) throw FormatError("checkpoint: dimension exceeds u32");
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64s(std::span<const double> a) {
    for (double d : a) f64(d);
  }
  [[nodiscard]] std::size_t size() const { return out_.size(); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n) {
      throw FormatError(std::string("checkpoint truncated reading ") + what +
                        " at offset " + std::to_string(pos_));
    }
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return in_[pos_++];
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::vector<double> f64s(std::size_t n, const char* what) {
    if (n > (in_.size() - pos_) / 8) need(n * 8, what);
    std::vector<double> out(n);
    for (auto& d : out) d = f64(what);
    return out;
  }
  [[nodiscard]] std::size_t pos() const { return pos_; }
  [[nodiscard]] bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

struct Header {
  std::uint8_t tag = 0;
  std::vector<std::uint32_t> dims;
};

Header header_of(const Layer& layer) {
  if (const auto* c = std::get_if<Conv2d>(&layer)) {
    const Shape& s = c->weight.shape();
    return {kConv,
            {static_cast<std::uint32_t>(s.n), static_cast<std::uint32_t>(s.c),
             static_cast<std::uint32_t>(s.h), static_cast<std::uint32_t>(s.w),
             static_cast<std::uint32_t>(c->stride), static_cast<std::uint32_t>(c->pad)}};
  }
  if (const auto* b = std::get_if<BatchNorm>(&layer)) {
    return {kBatchNorm, {static_cast<std::uint32_t>(b->state.channels())}};
  }
  if (std::holds_alternative<ReLU>(layer)) return {kRelu, {}};
  if (std::holds_alternative<MaxPool2x2>(layer)) return {kMaxPool, {}};
  if (std::holds_alternative<Flatten>(layer)) return {kFlatten, {}};
  const auto& l = std::get<Linear>(layer);
  return {kLinear,
          {static_cast<std::uint32_t>(l.weight.shape().n),
           static_cast<std::uint32_t>(l.weight.shape().sample_size())}};
}

// Visits every payload array in declaration order.
template <class Fn>
void for_each_array(const Model& model, Fn&& fn) {
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Layer& layer = model.layer(i);
    if (const auto* c = std::get_if<Conv2d>(&layer)) {
      fn(i, "weight", false, c->weight.data());
      fn(i, "bias", false, std::span<const double>(c->bias));
    } else if (const auto* b = std::get_if<BatchNorm>(&layer)) {
      const double scalars[2] = {b->state.eps, b->state.train_momentum};
      fn(i, "gamma", false, std::span<const double>(b->state.gamma));
      fn(i, "beta", false, std::span<const double>(b->state.beta));
      fn(i, "running_mean", true, std::span<const double>(b->state.running_mean));
      fn(i, "running_var", true, std::span<const double>(b->state.running_var));
      fn(i, "bn_scalars", false, std::span<const double>(scalars));
    } else if (const auto* l = std::get_if<Linear>(&layer)) {
      fn(i, "weight", false, l->weight.data());
      fn(i, "bias", false, std::span<const double>(l->bias));
    }
  }
}

std::size_t header_size(const Model& model) {
  std::size_t n = 4 + 4 + 12;
  for (const Layer& layer : model.layers()) n += 1 + 4 + 4 * header_of(layer).dims.size();
  return n;
}

}  // namespace

std::vector<std::uint8_t> serialize(const Model& model) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(model.size());
  w.u32(model.input_shape().c);
  w.u32(model.input_shape().h);
  w.u32(model.input_shape().w);
  for (const Layer& layer : model.layers()) {
    const Header h = header_of(layer);
    w.u8(h.tag);
    w.u32(h.dims.size());
    for (auto d : h.dims) w.u32(d);
  }
  for_each_array(model, [&](std::size_t, const char*, bool, std::span<const double> a) {
    w.f64s(a);
  });
  return w.take();
}

Model deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(4, "magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("checkpoint: bad magic at offset 0 (expected \"DUA1\")");
  }
  for (int i = 0; i < 4; ++i) r.u8("magic");
  const std::uint32_t count = r.u32("layer count");
  Shape input{1, r.u32("input c"), r.u32("input h"), r.u32("input w")};
  std::vector<Header> headers(count);
  for (auto& h : headers) {
    const std::size_t at = r.pos();
    h.tag = r.u8("layer tag");
    const std::uint32_t nd = r.u32("shape count");
    static constexpr std::uint32_t kExpected[] = {0, 6, 1, 0, 0, 0, 2};
    if (h.tag < kConv || h.tag > kLinear) {
      throw FormatError("checkpoint: unknown layer tag " + std::to_string(h.tag) +
                        " at offset " + std::to_string(at));
    }
    if (nd != kExpected[h.tag]) {
      throw FormatError("checkpoint: layer tag " + std::to_string(h.tag) + " has " +
                        std::to_string(nd) + " shape ints at offset " +
                        std::to_string(at));
    }
    for (std::uint32_t i = 0; i < nd; ++i) h.dims.push_back(r.u32("shape int"));
  }
  std::vector<Layer> layers;
  std::size_t bn_seq = 0;
  for (const Header& h : headers) {
    const auto& d = h.dims;
    switch (h.tag) {
      case kConv: {
        Conv2d c;
        const Shape ws{d[0], d[1], d[2], d[3]};
        c.weight = Tensor(ws, r.f64s(ws.numel(), "conv weight"));
        c.bias = r.f64s(d[0], "conv bias");
        c.stride = d[4];
        c.pad = d[5];
        layers.emplace_back(std::move(c));
        break;
      }
      case kBatchNorm: {
        BatchNorm b;
        b.name = "bn" + std::to_string(++bn_seq);
        b.state.gamma = r.f64s(d[0], "bn gamma");
        b.state.beta = r.f64s(d[0], "bn beta");
        b.state.running_mean = r.f64s(d[0], "bn running_mean");
        b.state.running_var = r.f64s(d[0], "bn running_var");
        b.state.eps = r.f64("bn eps");
        b.state.train_momentum = r.f64("bn momentum");
        layers.emplace_back(std::move(b));
        break;
      }
      case kRelu:
        layers.emplace_back(ReLU{});
        break;
      case kMaxPool:
        layers.emplace_back(MaxPool2x2{});
        break;
      case kFlatten:
        layers.emplace_back(Flatten{});
        break;
      case kLinear: {
        Linear l;
        const Shape ws{d[0], d[1], 1, 1};
        l.weight = Tensor(ws, r.f64s(ws.numel(), "linear weight"));
        l.bias = r.f64s(d[0], "linear bias");
        layers.emplace_back(std::move(l));
        break;
      }
      default:
        break;
    }
  }
  if (!r.done()) {
    throw FormatError("checkpoint: " + std::to_string(bytes.size() - r.pos()) +
                      " trailing bytes at offset " + std::to_string(r.pos()));
  }
  try {
    return Model(input, std::move(layers));
  } catch (const Error& e) {
    throw FormatError(std::string("checkpoint: inconsistent model: ") + e.what());
  }
}

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  const auto bytes = serialize(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return deserialize(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<CheckpointSegment> checkpoint_layout(const Model& model) {
  std::vector<CheckpointSegment> out;
  std::size_t offset = header_size(model);
  for_each_array(model, [&](std::size_t layer, const char* name, bool running,
                            std::span<const double> a) {
    out.push_back({layer, name, running, offset, a.size() * 8});
    offset += a.size() * 8;
  });
  return out;
}

}  // namespace dua::nn
