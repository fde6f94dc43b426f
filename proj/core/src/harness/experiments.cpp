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

#include "dua/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <tuple>
#include <utility>

#include "dua/corruption.hpp"
#include "dua/error.hpp"
#include "dua/harness/metrics.hpp"
#include "dua/rng.hpp"

namespace dua::harness {
namespace {

using Clock = std::chrono::steady_clock;

Tensor one_sample(const shift::Dataset& d, std::size_t i) {
  const Shape s = d.images.shape();
  const auto px = d.images.sample(i);
  return Tensor(Shape{1, s.c, s.h, s.w}, std::vector<double>(px.begin(), px.end()));
}

const std::vector<double>& last_mean(const nn::Model& m) {
  return m.bn_state(m.bn_count() - 1).running_mean;
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

adapt::AdaptConfig adapt_config_for(const ExperimentConfig& cfg,
                                    std::string_view purpose) {
  adapt::AdaptConfig a = cfg.adapt;
  a.schedule = bn::MomentumSchedule::make(a.schedule.rho0, a.schedule.omega,
                                          a.schedule.zeta);
  a.seed = derive_seed(cfg.seed, purpose);
  return a;
}

ExperimentRecord run_stream(const nn::Model& source, adapt::AdaptConfig cfg,
                            const StreamSpec& spec, std::string arm) {
  if (spec.data == nullptr || spec.eval == nullptr)
    throw ParameterError("run_stream: data and eval sets are required");
  const auto t0 = Clock::now();
  nn::Model model = source;
  cfg.validate(model);
  Xoshiro256pp rng = Xoshiro256pp::derive(cfg.seed, "adapt");
  const std::size_t n = spec.indices.size();

  ExperimentRecord rec;
  rec.arm = std::move(arm);
  rec.samples_used = n;
  rec.initial_mean = last_mean(model);
  rec.rows.reserve(n + 1);
  rec.rows.push_back({0, 0.0, error_pct(model, *spec.eval), running_stat_hash(model)});

  std::vector<double> prev = rec.initial_mean;
  for (std::size_t k = 1; k <= n; ++k) {
    const Tensor x = one_sample(*spec.data, spec.indices[k - 1]);
    const adapt::StepResult step =
        spec.fixed_momentum ? adapt::fixed_momentum_adapt_step(model, x, cfg, rng)
                            : adapt::dua_adapt_step(model, x, cfg, rng);
    const auto& cur = last_mean(model);
    rec.mean_change.push_back(l2_distance(cur, prev));
    prev = cur;

    StepRow row{k, step.weight, std::nullopt, running_stat_hash(model)};
    const bool due = k == n || contains(spec.eval_points, k) ||
                     (spec.eval_every != 0 && k % spec.eval_every == 0);
    if (due) row.error_pct = error_pct(model, *spec.eval);
    rec.rows.push_back(row);
  }
  rec.final_error_pct = *rec.rows.back().error_pct;
  if (spec.full_eval != nullptr) rec.final_full_error_pct = error_pct(model, *spec.full_eval);
  rec.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return rec;
}

std::vector<NormArm> run_norm_baseline(const ExperimentConfig& cfg,
                                       const nn::Model& source,
                                       const Workbench& wb, std::size_t draws) {
  std::vector<NormArm> arms;
  for (std::size_t bs : cfg.norm_batch_sizes) {
    NormArm arm;
    arm.batch_size = bs;
    const std::size_t fit = wb.pool_indices.size() / bs;
    const std::size_t d = std::max<std::size_t>(1, std::min(draws, fit));
    if (fit == 0)
      throw ConfigError("norm batch size " + std::to_string(bs) +
                        " exceeds the adaptation pool");
    const auto order = shuffled_stream(wb, d * bs, derive_seed(cfg.seed, "norm-stream"));
    for (std::size_t i = 0; i < d; ++i) {
      const std::span<const std::size_t> idx(order.data() + i * bs, bs);
      nn::Model model = source;
      adapt::norm_recompute(model, wb.test_corrupt.subset(idx).images);
      arm.draw_errors.push_back(error_pct(model, wb.eval_corrupt));
    }
    arm.error_pct = mean(arm.draw_errors);
    arms.push_back(std::move(arm));
  }
  return arms;
}

AdaptCurveResult run_adapt_curve(const ExperimentConfig& cfg,
                                 const nn::Model& source, const Workbench& wb) {
  AdaptCurveResult out;
  out.source_error_pct = error_pct(source, wb.eval_corrupt);
  if (cfg.full_eval) out.source_full_error_pct = error_pct(source, wb.test_corrupt);

  StreamSpec spec;
  spec.data = &wb.test_corrupt;
  spec.indices = shuffled_stream(wb, cfg.n_adapt_samples, derive_seed(cfg.seed, "stream"));
  spec.eval = &wb.eval_corrupt;
  spec.eval_every = cfg.eval_every;
  spec.full_eval = cfg.full_eval ? &wb.test_corrupt : nullptr;
  const adapt::AdaptConfig acfg = adapt_config_for(cfg, "adapt");
  out.dua = run_stream(source, acfg, spec, "dua");
  if (cfg.fixed_arm) {
    StreamSpec fixed = spec;
    fixed.fixed_momentum = true;
    out.fixed = run_stream(source, acfg, fixed, "fixed");
  }
  if (cfg.norm_arm) out.norm = run_norm_baseline(cfg, source, wb);
  return out;
}

StabilityResult run_shuffle_stability(const ExperimentConfig& cfg,
                                      const nn::Model& source,
                                      const Workbench& wb) {
  if (cfg.n_runs < 2) throw ConfigError("shuffle-stability needs n_runs >= 2");
  std::vector<std::size_t> checkpoints = cfg.stability_checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                    checkpoints.end());
  const std::size_t n = checkpoints.empty() ? 0 : checkpoints.back();

  std::vector<ExperimentRecord> records(cfg.n_runs);
  parallel_for(cfg.n_runs, cfg.threads, [&](std::size_t run) {
    const std::uint64_t key = cfg.identical_run_seeds ? 0 : run;
    StreamSpec spec;
    spec.data = &wb.test_corrupt;
    spec.indices =
        shuffled_stream(wb, n, mix_seed(derive_seed(cfg.seed, "stream"), key));
    spec.eval = &wb.eval_corrupt;
    spec.eval_every = 0;
    spec.eval_points = checkpoints;
    adapt::AdaptConfig acfg = adapt_config_for(cfg, "adapt");
    acfg.seed = mix_seed(acfg.seed, key);
    records[run] = run_stream(source, acfg, spec, "run" + std::to_string(run));
  });

  StabilityResult out;
  for (std::size_t run = 0; run < cfg.n_runs; ++run)
    for (std::size_t k : checkpoints)
      out.rows.push_back({run, k, *records[run].rows[k].error_pct});
  for (std::size_t k : checkpoints) {
    std::vector<double> errs;
    for (const auto& r : records) errs.push_back(*r.rows[k].error_pct);
    out.summary.push_back({k, mean(errs), stddev(errs)});
  }
  return out;
}

OmegaSweepResult run_omega_sweep(const ExperimentConfig& cfg,
                                 const nn::Model& source, const Workbench& wb) {
  OmegaSweepResult out;
  {
    nn::Model target = source;
    const std::size_t m = std::min<std::size_t>(512, wb.pool_indices.size());
    const auto idx = shuffled_stream(wb, m, derive_seed(cfg.seed, "shift-reference"));
    adapt::norm_recompute(target, wb.test_corrupt.subset(idx).images);
    out.initial_shift = l2_distance(last_mean(target), last_mean(source));
  }
  out.threshold = 0.05 * out.initial_shift;

  StreamSpec spec;
  spec.data = &wb.test_corrupt;
  spec.indices = shuffled_stream(wb, cfg.n_adapt_samples, derive_seed(cfg.seed, "stream"));
  spec.eval = &wb.eval_corrupt;
  spec.eval_every = cfg.eval_every;

  out.arms.resize(cfg.omegas.size());
  parallel_for(cfg.omegas.size(), cfg.threads, [&](std::size_t i) {
    OmegaArm& arm = out.arms[i];
    arm.omega = cfg.omegas[i];
    // omega = 1 is the fixed-momentum baseline, which has no floor.
    arm.zeta = arm.omega == 1.0 ? 0.0 : cfg.adapt.schedule.zeta;
    adapt::AdaptConfig acfg = adapt_config_for(cfg, "adapt");
    acfg.schedule = bn::MomentumSchedule::make(cfg.adapt.schedule.rho0, arm.omega, arm.zeta);
    char name[32];
    std::snprintf(name, sizeof name, "omega=%g", arm.omega);
    arm.record = run_stream(source, acfg, spec, name);

    const auto& ch = arm.record.mean_change;
    const std::size_t tail_from = 50;  // entries for k > 50
    if (ch.size() > tail_from) {
      const auto first = ch.begin() + static_cast<std::ptrdiff_t>(tail_from);
      arm.stability_max = *std::max_element(first, ch.end());
      arm.stability_min = *std::min_element(first, ch.end());
    }
    arm.settle_k = ch.size() + 1;
    for (std::size_t k = ch.size(); k > 0; --k) {
      if (ch[k - 1] >= out.threshold) break;
      arm.settle_k = k;
    }
  });
  return out;
}

std::vector<AblationRow> run_layer_ablation(const ExperimentConfig& cfg,
                                            const nn::Model& source,
                                            const Workbench& wb) {
  std::vector<std::pair<std::string, std::vector<std::string>>> masks;
  masks.emplace_back("none", std::vector<std::string>{});
  for (const auto& name : source.bn_names())
    masks.emplace_back(name, std::vector<std::string>{name});
  masks.emplace_back("all", source.bn_names());

  StreamSpec spec;
  spec.data = &wb.test_corrupt;
  spec.indices = shuffled_stream(wb, cfg.n_adapt_samples, derive_seed(cfg.seed, "stream"));
  spec.eval = &wb.eval_corrupt;
  spec.eval_every = 0;

  std::vector<AblationRow> rows(masks.size());
  parallel_for(masks.size(), cfg.threads, [&](std::size_t i) {
    adapt::AdaptConfig acfg = adapt_config_for(cfg, "adapt");
    acfg.layer_mask = masks[i].second;
    rows[i] = {masks[i].first, run_stream(source, acfg, spec, masks[i].first).final_error_pct};
  });
  return rows;
}

CycleResult run_cycle(const ExperimentConfig& cfg, const nn::Model& source,
                      const Workbench& wb) {
  CycleResult out;
  out.source_clean_error_pct = error_pct(source, wb.eval_clean);
  out.source_corrupt_error_pct = error_pct(source, wb.eval_corrupt);

  // Each domain consumes its own shuffled pool order.
  std::size_t clean_total = 0;
  std::size_t corrupt_total = 0;
  for (const auto& s : cfg.cycle) (s.corrupted ? corrupt_total : clean_total) += s.samples;
  const auto clean_order =
      shuffled_stream(wb, clean_total, derive_seed(cfg.seed, "cycle-clean"));
  const auto corrupt_order =
      shuffled_stream(wb, corrupt_total, derive_seed(cfg.seed, "cycle-corrupt"));
  std::size_t clean_used = 0;
  std::size_t corrupt_used = 0;

  nn::Model model = source;
  adapt::AdaptConfig acfg = adapt_config_for(cfg, "adapt");
  acfg.validate(model);
  Xoshiro256pp rng = Xoshiro256pp::derive(acfg.seed, "adapt");
  std::size_t step = 0;
  double w = 0.0;
  for (std::size_t seg = 0; seg < cfg.cycle.size(); ++seg) {
    const CycleSegment& s = cfg.cycle[seg];
    const shift::Dataset& eval = s.corrupted ? wb.eval_corrupt : wb.eval_clean;
    for (std::size_t k = 0; k <= s.samples; ++k) {
      if (k > 0) {
        const std::size_t idx = s.corrupted ? corrupt_order[corrupt_used++]
                                            : clean_order[clean_used++];
        const shift::Dataset& src = s.corrupted ? wb.test_corrupt : wb.test_clean;
        w = adapt::dua_adapt_step(model, one_sample(src, idx), acfg, rng).weight;
        ++step;
      }
      const bool due = k == 0 || k == 50 || k == s.samples ||
                       (cfg.eval_every != 0 && k % cfg.eval_every == 0);
      if (due) out.rows.push_back({step, seg, s.corrupted, k, w, error_pct(model, eval)});
    }
  }
  return out;
}

DensityResult export_density(const ExperimentConfig& cfg,
                             const nn::Model& source, const Workbench& wb,
                             const std::string& layer) {
  const std::size_t bn = source.bn_index(layer);  // ParameterError if unknown
  const std::size_t end = source.bn_layer_position(bn) + 1;
  const std::size_t n = std::min(cfg.density_samples, wb.eval_clean.size());
  const shift::Dataset clean = wb.eval_clean.slice(0, n);
  const shift::Dataset shifted = wb.eval_corrupt.slice(0, n);

  StreamSpec spec;
  spec.indices = shuffled_stream(wb, cfg.n_adapt_samples, derive_seed(cfg.seed, "stream"));
  spec.eval_every = 0;
  const adapt::AdaptConfig acfg = adapt_config_for(cfg, "adapt");

  // Adapted copies: corrupted stream for (c), clean stream for the W1 check.
  auto adapted = [&](const shift::Dataset& data) {
    nn::Model m = source;
    Xoshiro256pp rng = Xoshiro256pp::derive(acfg.seed, "adapt");
    adapt::AdaptConfig c = acfg;
    for (std::size_t i : spec.indices) adapt::dua_adapt_step(m, one_sample(data, i), c, rng);
    return m;
  };
  const nn::Model on_shift = adapted(wb.test_corrupt);
  const nn::Model on_clean = adapted(wb.test_clean);

  const Tensor out_a = nn::forward_eval_until(source, clean.images, end);
  const Tensor out_b = nn::forward_eval_until(source, shifted.images, end);
  const Tensor out_c = nn::forward_eval_until(on_shift, shifted.images, end);
  const Tensor out_d = nn::forward_eval_until(on_clean, clean.images, end);

  const Shape s = out_a.shape();
  auto channel_values = [&s](const Tensor& t, std::size_t c) {
    std::vector<double> v;
    v.reserve(s.n * s.h * s.w);
    const auto data = t.data();
    const std::size_t plane = s.h * s.w;
    for (std::size_t i = 0; i < s.n; ++i) {
      const std::size_t base = (i * s.c + c) * plane;
      v.insert(v.end(), data.begin() + static_cast<std::ptrdiff_t>(base),
               data.begin() + static_cast<std::ptrdiff_t>(base + plane));
    }
    return v;
  };
  auto moments = [](const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair{m, ss / static_cast<double>(v.size())};
  };

  DensityResult out;
  out.layer = layer;
  for (std::size_t c = 0; c < s.c; ++c) {
    const auto a = channel_values(out_a, c);
    const auto b = channel_values(out_b, c);
    const auto cc = channel_values(out_c, c);
    const auto d = channel_values(out_d, c);
    double lo = a.front();
    double hi = a.front();
    for (const auto* v : {&a, &b, &cc}) {
      const auto [mn, mx] = std::minmax_element(v->begin(), v->end());
      lo = std::min(lo, *mn);
      hi = std::max(hi, *mx);
    }
    if (!(hi > lo)) hi = lo + 1.0;

    ChannelDensity ch;
    ch.channel = c;
    ch.samples = a.size();
    for (std::size_t i = 0; i <= cfg.density_bins; ++i)
      ch.bin_edges.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(cfg.density_bins));
    ch.count_clean = histogram(a, lo, hi, cfg.density_bins);
    ch.count_shift = histogram(b, lo, hi, cfg.density_bins);
    ch.count_adapted = histogram(cc, lo, hi, cfg.density_bins);
    std::tie(ch.mean_clean, ch.var_clean) = moments(a);
    std::tie(ch.mean_shift, ch.var_shift) = moments(b);
    std::tie(ch.mean_adapted, ch.var_adapted) = moments(cc);
    ch.w1_clean_readapted = wasserstein1(a, d);
    out.mean_abs_shift_unadapted += std::abs(ch.mean_shift - ch.mean_clean);
    out.mean_abs_shift_adapted += std::abs(ch.mean_adapted - ch.mean_clean);
    out.mean_w1_clean_readapted += ch.w1_clean_readapted;
    out.channels.push_back(std::move(ch));
  }
  const auto nc = static_cast<double>(s.c);
  out.mean_abs_shift_unadapted /= nc;
  out.mean_abs_shift_adapted /= nc;
  out.mean_w1_clean_readapted /= nc;
  return out;
}

std::vector<EvalRow> run_eval_table(const ExperimentConfig& cfg,
                                    const nn::Model& source,
                                    const Workbench& wb) {
  std::vector<EvalRow> rows;
  rows.push_back({"clean", 0, error_pct(source, wb.eval_clean)});
  for (auto kind : shift::kAllCorruptions) {
    for (int sev = 1; sev <= 5; ++sev) {
      const shift::Dataset d = shift::corrupt(wb.eval_clean, {kind, sev},
                                              derive_seed(cfg.seed, "eval-table"));
      rows.push_back({std::string(shift::to_string(kind)), sev, error_pct(source, d)});
    }
  }
  return rows;
}

}  // namespace dua::harness
