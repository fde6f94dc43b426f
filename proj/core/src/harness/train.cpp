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

#include "dua/harness/train.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "dua/augment.hpp"
#include "dua/harness/metrics.hpp"
#include "dua/loss.hpp"
#include "dua/rng.hpp"
#include "dua/sgd.hpp"

namespace dua::harness {

TrainResult train_model(const ExperimentConfig& cfg, const Workbench& wb) {
  const shift::Dataset& data = wb.train;
  data.validate();
  TrainResult result{nn::make_desk_cnn(derive_seed(cfg.seed, "init")), 0.0, {}};
  nn::Model& model = result.model;
  nn::SgdState sgd;
  Xoshiro256pp rng(derive_seed(cfg.seed, "train-shuffle"));
  Xoshiro256pp aug_rng(derive_seed(cfg.seed, "train-augment"));
  const shift::AugmentSet& augs = cfg.train.augmentations;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t bs = cfg.train.batch_size;

  for (std::size_t epoch = 0; epoch < cfg.train.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::size_t n = std::min(bs, order.size() - start);
      if (n < 2) break;  // batch statistics need two samples
      const std::span<const std::size_t> idx(order.data() + start, n);
      shift::Dataset batch = data.subset(idx);
      if (!augs.empty()) {
        const Shape one{1, batch.images.shape().c, batch.images.shape().h,
                        batch.images.shape().w};
        for (std::size_t i = 0; i < n; ++i) {
          auto px = batch.images.sample(i);
          const Tensor x(one, std::vector<double>(px.begin(), px.end()));
          const Tensor y = shift::augment_batch(x, 1, augs, aug_rng).tensor;
          std::copy(y.data().begin(), y.data().end(), px.begin());
        }
      }
      nn::ForwardCache cache;
      const Tensor logits = nn::forward_train(model, batch.images, &cache);
      const nn::LossResult loss = nn::softmax_cross_entropy(logits, batch.labels);
      const auto grads = nn::model_backward(model, cache, loss.logit_grad);
      nn::sgd_step(model, grads, cfg.train.lr, cfg.train.momentum, sgd);
      loss_sum += loss.loss;
      ++batches;
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
  }
  result.clean_error_pct = error_pct(model, wb.test_clean);
  return result;
}

}  // namespace dua::harness
