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

#ifndef DUA_HARNESS_TRAIN_HPP_
#define DUA_HARNESS_TRAIN_HPP_

#include <vector>

#include "dua/harness/config.hpp"
#include "dua/harness/data.hpp"
#include "dua/model.hpp"

namespace dua::harness {

struct TrainResult {
  nn::Model model;
  double clean_error_pct = 0.0;  ///< full clean test set
  std::vector<double> epoch_loss;
};

/// SGD on the desk-scale CNN with seed-deterministic init and shuffling.
TrainResult train_model(const ExperimentConfig& cfg, const Workbench& wb);

}  // namespace dua::harness

#endif  // DUA_HARNESS_TRAIN_HPP_
