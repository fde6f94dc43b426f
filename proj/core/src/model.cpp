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

#include "dua/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <type_traits>

#include "dua/error.hpp"
#include "dua/rng.hpp"

namespace dua::nn {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Shape next_shape(const Layer& layer, const Shape& in, std::size_t index) {
  const std::string where = "layer " + std::to_string(index);
  return std::visit(
      Overloaded{
          [&](const Conv2d& c) {
            const Shape& ws = c.weight.shape();
            if (ws.c != in.c) {
              throw DimensionError(where + " (conv2d): weight c_in axis " +
                                   std::to_string(ws.c) + " vs input channel axis " +
                                   std::to_string(in.c));
            }
            if (c.bias.size() != ws.n) {
              throw DimensionError(where + " (conv2d): bias length vs c_out axis");
            }
            if (c.stride == 0) throw ParameterError(where + " (conv2d): stride 0");
            if (in.h + 2 * c.pad < ws.h || in.w + 2 * c.pad < ws.w) {
              throw DimensionError(where + " (conv2d): kernel exceeds padded input");
            }
            return Shape{in.n, ws.n, (in.h + 2 * c.pad - ws.h) / c.stride + 1,
                         (in.w + 2 * c.pad - ws.w) / c.stride + 1};
          },
          [&](const BatchNorm& b) {
            b.state.validate();
            if (b.state.channels() != in.c) {
              throw DimensionError(where + " (batchnorm " + b.name + "): " +
                                   std::to_string(b.state.channels()) +
                                   " channels vs input channel axis " +
                                   std::to_string(in.c));
            }
            return in;
          },
          [&](const ReLU&) { return in; },
          [&](const MaxPool2x2&) {
            if (in.h % 2 != 0 || in.w % 2 != 0) {
              throw DimensionError(where + " (maxpool2x2): odd height/width axes");
            }
            return Shape{in.n, in.c, in.h / 2, in.w / 2};
          },
          [&](const Flatten&) { return Shape{in.n, in.sample_size(), 1, 1}; },
          [&](const Linear& l) {
            const Shape& ws = l.weight.shape();
            if (ws.sample_size() != in.sample_size()) {
              throw DimensionError(where + " (linear): weight column axis " +
                                   std::to_string(ws.sample_size()) +
                                   " vs input feature axis " +
                                   std::to_string(in.sample_size()));
            }
            if (l.bias.size() != ws.n) {
              throw DimensionError(where + " (linear): bias length vs output axis");
            }
            return Shape{in.n, ws.n, 1, 1};
          },
      },
      layer);
}

void check_input(const Model& m, const Tensor& x) {
  const Shape& s = x.shape();
  const Shape& in = m.input_shape();
  if (s.c != in.c || s.h != in.h || s.w != in.w) {
    throw DimensionError("model input " + to_string(s) +
                         " does not match expected sample shape " + to_string(in));
  }
}

// Eval-mode layer application; elementwise layers reuse the input buffer.
Tensor run_stateless(const Layer& layer, Tensor&& x) {
  return std::visit(
      Overloaded{
          [&](const Conv2d& c) {
            return conv2d_forward(x, c.weight, c.bias, c.stride, c.pad);
          },
          [&](const BatchNorm& b) {
            bn::bn_normalize_inplace(x, b.state.running_mean, b.state.running_var,
                                     b.state);
            return std::move(x);
          },
          [&](const ReLU&) {
            relu_inplace(x);
            return std::move(x);
          },
          [&](const MaxPool2x2&) { return maxpool2x2_forward(x); },
          [&](const Flatten&) {
            const Shape& s = x.shape();
            return std::move(x).reshaped({s.n, s.sample_size(), 1, 1});
          },
          [&](const Linear& l) { return linear_forward(x, l.weight, l.bias); },
      },
      layer);
}

}  // namespace

Model::Model(Shape input, std::vector<Layer> layers)
    : input_{1, input.c, input.h, input.w}, layers_(std::move(layers)) {
  std::set<std::string> seen;
  Shape s = input_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    s = next_shape(layers_[i], s, i);
    if (const auto* b = std::get_if<BatchNorm>(&layers_[i])) {
      if (b->name.empty()) throw ParameterError("batchnorm layer with empty name");
      if (!seen.insert(b->name).second) {
        throw ParameterError("duplicate batchnorm name '" + b->name + "'");
      }
      bn_names_.push_back(b->name);
      bn_positions_.push_back(i);
    }
  }
}

std::size_t Model::bn_index(std::string_view name) const {
  for (std::size_t i = 0; i < bn_names_.size(); ++i) {
    if (bn_names_[i] == name) return i;
  }
  throw ParameterError("unknown batchnorm layer '" + std::string(name) + "'");
}

bn::BatchNormState& Model::bn_state(std::size_t bn) {
  return std::get<BatchNorm>(layers_.at(bn_positions_.at(bn))).state;
}

const bn::BatchNormState& Model::bn_state(std::size_t bn) const {
  return std::get<BatchNorm>(layers_.at(bn_positions_.at(bn))).state;
}

Shape Model::shape_after(std::size_t end, std::size_t n) const {
  Shape s{n, input_.c, input_.h, input_.w};
  for (std::size_t i = 0; i < end && i < layers_.size(); ++i) {
    s = next_shape(layers_[i], s, i);
  }
  return s;
}

std::vector<ParamView> Model::parameters() {
  std::vector<ParamView> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    std::visit(Overloaded{
                   [&](Conv2d& c) {
                     out.push_back({i, "weight", c.weight.data()});
                     out.push_back({i, "bias", c.bias});
                   },
                   [&](BatchNorm& b) {
                     out.push_back({i, "gamma", b.state.gamma});
                     out.push_back({i, "beta", b.state.beta});
                   },
                   [&](Linear& l) {
                     out.push_back({i, "weight", l.weight.data()});
                     out.push_back({i, "bias", l.bias});
                   },
                   [](auto&) {},
               },
               layers_[i]);
  }
  return out;
}

std::vector<ConstParamView> Model::parameters() const {
  std::vector<ConstParamView> out;
  for (auto& p : const_cast<Model*>(this)->parameters()) {
    out.push_back({p.layer, p.name, p.values});
  }
  return out;
}

Model make_desk_cnn(std::uint64_t seed) {
  Xoshiro256pp rng = Xoshiro256pp::derive(seed, "init");
  auto he = [&](Shape s) {
    Tensor w(s);
    const double sd = std::sqrt(2.0 / static_cast<double>(s.sample_size()));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = sd * rng.normal();
    return w;
  };
  auto bn = [](std::string name, std::size_t c) {
    return BatchNorm{std::move(name), bn::BatchNormState::fresh(c)};
  };
  std::vector<Layer> layers;
  layers.emplace_back(Conv2d{he({16, 1, 3, 3}), std::vector<double>(16, 0.0), 1, 1});
  layers.emplace_back(bn("bn1", 16));
  layers.emplace_back(ReLU{});
  layers.emplace_back(MaxPool2x2{});
  layers.emplace_back(Conv2d{he({32, 16, 3, 3}), std::vector<double>(32, 0.0), 1, 1});
  layers.emplace_back(bn("bn2", 32));
  layers.emplace_back(ReLU{});
  layers.emplace_back(MaxPool2x2{});
  layers.emplace_back(Flatten{});
  layers.emplace_back(Linear{he({64, 32 * 7 * 7, 1, 1}), std::vector<double>(64, 0.0)});
  layers.emplace_back(bn("bn3", 64));
  layers.emplace_back(ReLU{});
  layers.emplace_back(Linear{he({10, 64, 1, 1}), std::vector<double>(10, 0.0)});
  return Model({1, 1, 28, 28}, std::move(layers));
}

Tensor forward_eval(const Model& model, const Tensor& x) {
  return forward_eval_until(model, x, model.size());
}

Tensor forward_eval_until(const Model& model, const Tensor& x, std::size_t end) {
  check_input(model, x);
  Tensor h = x;
  for (std::size_t i = 0; i < end && i < model.size(); ++i) {
    h = run_stateless(model.layer(i), std::move(h));
  }
  return h;
}

Tensor forward_train(Model& model, const Tensor& x, ForwardCache* cache) {
  check_input(model, x);
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->inputs.reserve(model.size());
  }
  Tensor h = x;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (cache != nullptr) cache->inputs.push_back(h);
    if (auto* b = std::get_if<BatchNorm>(&model.layer(i))) {
      h = bn::bn_forward_train(h, b->state, b->state.train_momentum);
    } else {
      h = run_stateless(model.layer(i), std::move(h));
    }
  }
  return h;
}

Tensor forward_adapt(Model& model, const Tensor& x, const AdaptPlan& plan) {
  check_input(model, x);
  if (plan.mask.size() != model.bn_count()) {
    throw DimensionError("adapt plan mask has " + std::to_string(plan.mask.size()) +
                         " entries for " + std::to_string(model.bn_count()) +
                         " batchnorm layers");
  }
  if (plan.incoming != nullptr) {
    plan.incoming->assign(model.bn_count(), bn::ChannelStats{});
  }
  Tensor h = x;
  std::size_t bn_i = 0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (auto* b = std::get_if<BatchNorm>(&model.layer(i))) {
      if (plan.mask[bn_i]) {
        bn::ChannelStats* rec =
            plan.incoming != nullptr ? &(*plan.incoming)[bn_i] : nullptr;
        h = bn::bn_forward_adapt(h, b->state, plan.weight, plan.normalization, rec);
      } else {
        h = bn::bn_forward_eval(h, b->state);
      }
      ++bn_i;
    } else {
      h = run_stateless(model.layer(i), std::move(h));
    }
  }
  return h;
}

Tensor model_forward(Model& model, const Tensor& x, Mode mode, const AdaptPlan* plan) {
  switch (mode) {
    case Mode::train:
      return forward_train(model, x);
    case Mode::eval:
      return forward_eval(model, x);
    case Mode::adapt:
      if (plan == nullptr) throw ParameterError("model_forward: adapt mode needs a plan");
      return forward_adapt(model, x, *plan);
  }
  throw ParameterError("model_forward: unknown mode");
}

std::vector<LayerGrad> model_backward(const Model& model, const ForwardCache& cache,
                                      const Tensor& logit_grad) {
  if (cache.inputs.size() != model.size()) {
    throw DimensionError("model_backward: cache holds " +
                         std::to_string(cache.inputs.size()) + " inputs for " +
                         std::to_string(model.size()) + " layers");
  }
  std::vector<LayerGrad> grads(model.size());
  Tensor g = logit_grad;
  for (std::size_t r = model.size(); r-- > 0;) {
    const Tensor& x = cache.inputs[r];
    LayerGrad lg = std::visit(
        Overloaded{
            [&](const Conv2d& c) {
              return conv2d_backward(x, c.weight, g, c.stride, c.pad);
            },
            [&](const BatchNorm& b) { return bn::bn_backward_train(x, b.state, g); },
            [&](const ReLU&) { return LayerGrad{relu_backward(x, g), {}}; },
            [&](const MaxPool2x2&) { return LayerGrad{maxpool2x2_backward(x, g), {}}; },
            [&](const Flatten&) { return LayerGrad{g.reshaped(x.shape()), {}}; },
            [&](const Linear& l) { return linear_backward(x, l.weight, g); },
        },
        model.layer(r));
    g = lg.input_grad;
    grads[r] = std::move(lg);
  }
  return grads;
}

std::vector<int> predict(const Model& model, const Tensor& images, std::size_t chunk) {
  const std::size_t n = images.shape().n;
  if (chunk == 0) chunk = n == 0 ? 1 : n;
  std::vector<int> out;
  out.reserve(n);
  for (std::size_t b = 0; b < n; b += chunk) {
    const std::size_t cnt = std::min(chunk, n - b);
    const Tensor logits = forward_eval(model, slice_batch(images, b, cnt));
    for (std::size_t i = 0; i < cnt; ++i) {
      auto row = logits.sample(i);
      out.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) -
                                     row.begin()));
    }
  }
  return out;
}

}  // namespace dua::nn
