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

#include "dua/sgd.hpp"

#include <string>

#include "dua/error.hpp"

namespace dua::nn {

void sgd_step(Model& model, const std::vector<LayerGrad>& grads, double lr,
              double momentum, SgdState& state) {
  if (!(lr > 0.0)) throw ParameterError("sgd_step: lr must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ParameterError("sgd_step: momentum must be in [0, 1)");
  }
  if (grads.size() != model.size()) {
    throw DimensionError("sgd_step: " + std::to_string(grads.size()) +
                         " layer gradients for " + std::to_string(model.size()) +
                         " layers");
  }
  auto params = model.parameters();
  if (state.velocity.empty()) {
    for (const auto& p : params) state.velocity.emplace_back(p.values.size(), 0.0);
  }
  if (state.velocity.size() != params.size()) {
    throw DimensionError("sgd_step: velocity does not match parameter count");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    const auto& pg = grads[p.layer].param_grads;
    auto it = pg.find(p.name);
    if (it == pg.end()) {
      throw DimensionError("sgd_step: missing gradient for layer " +
                           std::to_string(p.layer) + " " + p.name);
    }
    const std::vector<double>& g = it->second;
    std::vector<double>& v = state.velocity[i];
    if (g.size() != p.values.size() || v.size() != p.values.size()) {
      throw DimensionError("sgd_step: gradient for layer " + std::to_string(p.layer) +
                           " " + p.name + " has length " + std::to_string(g.size()) +
                           ", parameter has " + std::to_string(p.values.size()));
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
      v[j] = momentum * v[j] + g[j];
      p.values[j] -= lr * v[j];
    }
  }
}

}  // namespace dua::nn
