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

#ifndef DUA_MODEL_HPP_
#define DUA_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dua/bn.hpp"
#include "dua/layers.hpp"
#include "dua/tensor.hpp"

namespace dua::nn {

struct Conv2d {
  Tensor weight;  ///< (c_out, c_in, kh, kw)
  std::vector<double> bias;
  std::size_t stride = 1;
  std::size_t pad = 0;
  friend bool operator==(const Conv2d&, const Conv2d&) = default;
};

struct BatchNorm {
  std::string name;
  bn::BatchNormState state;
  friend bool operator==(const BatchNorm&, const BatchNorm&) = default;
};

struct ReLU {
  friend bool operator==(const ReLU&, const ReLU&) = default;
};
struct MaxPool2x2 {
  friend bool operator==(const MaxPool2x2&, const MaxPool2x2&) = default;
};
struct Flatten {
  friend bool operator==(const Flatten&, const Flatten&) = default;
};

struct Linear {
  Tensor weight;  ///< (d_out, d_in, 1, 1)
  std::vector<double> bias;
  friend bool operator==(const Linear&, const Linear&) = default;
};

using Layer = std::variant<Conv2d, BatchNorm, ReLU, MaxPool2x2, Flatten, Linear>;

enum class Mode { train, eval, adapt };

/// Per-call instructions for adapt-mode forward passes.
struct AdaptPlan {
  /// One flag per BN layer (model order); unmasked layers run in eval mode.
  std::vector<bool> mask;
  /// EMA weight shared by every masked layer this step.
  double weight = 0.0;
  bn::AdaptNormalization normalization = bn::AdaptNormalization::post_update;
  /// When non-null, resized to the BN count and filled with each masked
  /// layer's incoming batch statistics.
  std::vector<bn::ChannelStats>* incoming = nullptr;
};

/// Flat view of one trainable parameter.
struct ParamView {
  std::size_t layer = 0;
  std::string name;  ///< "weight", "bias", "gamma" or "beta"
  std::span<double> values;
};
struct ConstParamView {
  std::size_t layer = 0;
  std::string name;
  std::span<const double> values;
};

/// Ordered layer stack with individually addressable BN layers.
class Model {
 public:
  Model() = default;
  /// `input` gives (c, h, w) of one sample; n is ignored. Throws
  /// DimensionError if consecutive layers are incompatible and
  /// ParameterError on duplicate or empty BN names.
  Model(Shape input, std::vector<Layer> layers);

  [[nodiscard]] const Shape& input_shape() const { return input_; }
  [[nodiscard]] std::span<const Layer> layers() const { return layers_; }
  [[nodiscard]] Layer& layer(std::size_t i) { return layers_.at(i); }
  [[nodiscard]] const Layer& layer(std::size_t i) const { return layers_.at(i); }
  [[nodiscard]] std::size_t size() const { return layers_.size(); }

  [[nodiscard]] const std::vector<std::string>& bn_names() const {
    return bn_names_;
  }
  [[nodiscard]] std::size_t bn_count() const { return bn_names_.size(); }
  /// Throws ParameterError for unknown names.
  [[nodiscard]] std::size_t bn_index(std::string_view name) const;
  /// Position of BN layer `bn` in the layer list.
  [[nodiscard]] std::size_t bn_layer_position(std::size_t bn) const {
    return bn_positions_.at(bn);
  }
  bn::BatchNormState& bn_state(std::size_t bn);
  [[nodiscard]] const bn::BatchNormState& bn_state(std::size_t bn) const;
  bn::BatchNormState& bn_state(std::string_view name) {
    return bn_state(bn_index(name));
  }
  [[nodiscard]] const bn::BatchNormState& bn_state(std::string_view name) const {
    return bn_state(bn_index(name));
  }

  /// Output shape of layers [0, end) for a batch of `n` samples.
  [[nodiscard]] Shape shape_after(std::size_t end, std::size_t n = 1) const;
  [[nodiscard]] Shape output_shape(std::size_t n = 1) const {
    return shape_after(layers_.size(), n);
  }

  /// Trainable parameters in declaration order.
  std::vector<ParamView> parameters();
  [[nodiscard]] std::vector<ConstParamView> parameters() const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  Shape input_{};
  std::vector<Layer> layers_;
  std::vector<std::string> bn_names_;
  std::vector<std::size_t> bn_positions_;
};

/// Conv(1->16)-BN-ReLU-Pool-Conv(16->32)-BN-ReLU-Pool-Flatten-Linear(1568->64)
/// -BN-ReLU-Linear(64->10) on 1x28x28 inputs, BN layers named bn1..bn3.
/// He-normal weights drawn from `seed`.
Model make_desk_cnn(std::uint64_t seed);

/// Inputs to every layer, captured by a train-mode forward for backward.
struct ForwardCache {
  std::vector<Tensor> inputs;
};

/// Pure inference with frozen running statistics.
Tensor forward_eval(const Model& model, const Tensor& x);
/// Runs layers [0, end) in eval mode.
Tensor forward_eval_until(const Model& model, const Tensor& x, std::size_t end);
/// Batch-statistics normalization; each BN layer updates its running
/// statistics exactly once.
Tensor forward_train(Model& model, const Tensor& x, ForwardCache* cache = nullptr);
/// Masked BN layers adapt with `plan.weight`; everything else is eval mode.
Tensor forward_adapt(Model& model, const Tensor& x, const AdaptPlan& plan);

/// Dispatches on `mode`. `plan` is required for Mode::adapt.
Tensor model_forward(Model& model, const Tensor& x, Mode mode,
                     const AdaptPlan* plan = nullptr);

/// Per-layer gradients for a train-mode forward recorded in `cache`.
std::vector<LayerGrad> model_backward(const Model& model,
                                      const ForwardCache& cache,
                                      const Tensor& logit_grad);

/// Argmax class per sample, evaluated in chunks of `chunk` samples.
std::vector<int> predict(const Model& model, const Tensor& images,
                         std::size_t chunk = 200);

}  // namespace dua::nn

#endif  // DUA_MODEL_HPP_
