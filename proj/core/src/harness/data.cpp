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

#include "dua/harness/data.hpp"

#include <numeric>
#include <utility>

#include "dua/corruption.hpp"
#include "dua/error.hpp"
#include "dua/idx.hpp"
#include "dua/rng.hpp"
#include "dua/synthetic.hpp"

namespace dua::harness {
namespace {

void shuffle(std::vector<std::size_t>& v, Xoshiro256pp& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

shift::Dataset load_split(const std::filesystem::path& dir, const char* prefix,
                          std::size_t n) {
  const auto images = dir / (std::string(prefix) + "-images-idx3-ubyte");
  const auto labels = dir / (std::string(prefix) + "-labels-idx1-ubyte");
  shift::Dataset d = shift::load_idx(images, labels);
  if (d.size() < n)
    throw ConfigError(images.string() + " holds " + std::to_string(d.size()) +
                      " images, fewer than requested");
  return d.slice(0, n);
}

}  // namespace

Workbench make_workbench(const ExperimentConfig& cfg, bool with_train) {
  Workbench wb;
  if (cfg.dataset == "mnist") {
    if (with_train) wb.train = load_split(cfg.mnist_dir, "train", cfg.train.n_train);
    wb.test_clean = load_split(cfg.mnist_dir, "t10k", cfg.n_test);
  } else {
    if (with_train)
      wb.train = shift::gen_synthetic(cfg.train.n_train,
                                      derive_seed(cfg.seed, "train-data"));
    wb.test_clean = shift::gen_synthetic(cfg.n_test, derive_seed(cfg.seed, "test-data"));
  }
  wb.test_corrupt = shift::corrupt(wb.test_clean, cfg.corruption,
                                   derive_seed(cfg.seed, "corruption"));

  std::vector<std::size_t> order(wb.test_clean.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Xoshiro256pp rng(derive_seed(cfg.seed, "split"));
  shuffle(order, rng);
  if (cfg.eval_slice >= order.size())
    throw ConfigError("eval_slice leaves no adaptation pool");
  wb.eval_indices.assign(order.begin(),
                         order.begin() + static_cast<std::ptrdiff_t>(cfg.eval_slice));
  wb.pool_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(cfg.eval_slice),
                         order.end());
  wb.eval_clean = wb.test_clean.subset(wb.eval_indices);
  wb.eval_corrupt = wb.test_corrupt.subset(wb.eval_indices);
  return wb;
}

std::vector<std::size_t> shuffled_stream(const Workbench& wb, std::size_t n,
                                         std::uint64_t seed) {
  if (n > wb.pool_indices.size())
    throw ConfigError("stream of " + std::to_string(n) +
                      " samples exceeds the adaptation pool");
  std::vector<std::size_t> v = wb.pool_indices;
  Xoshiro256pp rng(seed);
  shuffle(v, rng);
  v.resize(n);
  return v;
}

}  // namespace dua::harness
