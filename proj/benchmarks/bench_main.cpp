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

#include <benchmark/benchmark.h>

#include "dua/adapt.hpp"
#include "dua/bn.hpp"
#include "dua/layers.hpp"
#include "dua/model.hpp"
#include "dua/rng.hpp"
#include "dua/synthetic.hpp"

namespace {

dua::Tensor random_tensor(dua::Shape s, std::uint64_t seed) {
  dua::Xoshiro256pp rng(seed);
  dua::Tensor t(s, 0.0);
  for (double& v : t.data()) v = rng.normal();
  return t;
}

void BM_Conv2dForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dua::Tensor x = random_tensor({n, 16, 14, 14}, 1);
  const dua::Tensor w = random_tensor({32, 16, 3, 3}, 2);
  const std::vector<double> bias(32, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(dua::nn::conv2d_forward(x, w, bias, 1, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Conv2dForward)->Arg(1)->Arg(64);

void BM_BatchStats(benchmark::State& state) {
  const dua::Tensor x = random_tensor({64, 16, 28, 28}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dua::bn::batch_stats(x));
}
BENCHMARK(BM_BatchStats);

void BM_ForwardEval(benchmark::State& state) {
  const dua::nn::Model model = dua::nn::make_desk_cnn(7);
  const auto data = dua::shift::gen_synthetic(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(dua::nn::forward_eval(model, data.images));
}
BENCHMARK(BM_ForwardEval)->Arg(64)->Arg(200);

void BM_AdaptStep(benchmark::State& state) {
  dua::nn::Model model = dua::nn::make_desk_cnn(7);
  const auto data = dua::shift::gen_synthetic(1, 9);
  dua::adapt::AdaptConfig cfg;
  cfg.batch_size = static_cast<std::size_t>(state.range(0));
  dua::Xoshiro256pp rng(10);
  for (auto _ : state)
    benchmark::DoNotOptimize(dua::adapt::dua_adapt_step(model, data.images, cfg, rng));
}
BENCHMARK(BM_AdaptStep)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
