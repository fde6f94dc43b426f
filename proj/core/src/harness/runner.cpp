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

#include "dua/harness/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "dua/checkpoint.hpp"
#include "dua/corruption.hpp"
#include "dua/error.hpp"
#include "dua/harness/csv.hpp"
#include "dua/harness/data.hpp"
#include "dua/harness/experiments.hpp"
#include "dua/harness/metrics.hpp"
#include "dua/harness/train.hpp"

namespace dua::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Emitter {
  fs::path dir;
  std::string hash;
  json artifacts = json::array();

  CsvWriter open(const std::string& name, std::initializer_list<std::string> cols) {
    artifacts.push_back(name);
    return CsvWriter(dir / name, hash, cols);
  }
};

void write_curve(Emitter& em, const std::string& name, const ExperimentRecord& rec) {
  auto csv = em.open(name, {"k", "w_k", "error_pct"});
  for (const auto& r : rec.rows) {
    if (!r.error_pct) continue;
    csv.cell(r.k).precise(r.w_k).cell(*r.error_pct);
    csv.end_row();
  }
}

void write_stats(Emitter& em, const std::string& name, const ExperimentRecord& rec) {
  auto csv = em.open(name, {"k", "w_k", "stat_hash", "last_bn_mean_change"});
  for (const auto& r : rec.rows) {
    char h[17];
    std::snprintf(h, sizeof h, "%016llx", static_cast<unsigned long long>(r.stat_hash));
    csv.cell(r.k).precise(r.w_k).cell(std::string(h));
    csv.precise(r.k == 0 ? 0.0 : rec.mean_change[r.k - 1]);
    csv.end_row();
  }
}

json record_summary(const ExperimentRecord& rec) {
  json j{{"arm", rec.arm},
         {"final_error_pct", rec.final_error_pct},
         {"samples_used", rec.samples_used},
         {"wall_time_s", rec.wall_time_s}};
  if (rec.final_full_error_pct) j["final_full_error_pct"] = *rec.final_full_error_pct;
  return j;
}

nn::Model load_source(const ExperimentConfig& cfg) {
  return nn::load_checkpoint(cfg.checkpoint);
}

json run_train(const ExperimentConfig& cfg, Emitter& em) {
  const Workbench wb = make_workbench(cfg, true);
  const TrainResult res = train_model(cfg, wb);
  const fs::path ckpt(cfg.checkpoint);
  if (ckpt.has_parent_path()) fs::create_directories(ckpt.parent_path());
  nn::save_checkpoint(res.model, ckpt);
  auto csv = em.open("train.csv", {"epoch", "loss"});
  for (std::size_t e = 0; e < res.epoch_loss.size(); ++e) {
    csv.cell(e + 1).cell(res.epoch_loss[e]);
    csv.end_row();
  }
  return {{"clean_error_pct", res.clean_error_pct}, {"checkpoint", cfg.checkpoint}};
}

json run_eval(const ExperimentConfig& cfg, Emitter& em) {
  const nn::Model src = load_source(cfg);
  const Workbench wb = make_workbench(cfg, false);
  auto csv = em.open("eval.csv", {"corruption", "severity", "error_pct"});
  json summary = json::object();
  for (const auto& r : run_eval_table(cfg, src, wb)) {
    csv.cell(r.corruption).cell(r.severity).cell(r.error_pct);
    csv.end_row();
    summary[r.corruption + "/" + std::to_string(r.severity)] = r.error_pct;
  }
  return summary;
}

void write_norm(Emitter& em, const std::vector<NormArm>& arms) {
  auto csv = em.open("norm_baseline.csv", {"batch_size", "error_pct"});
  for (const auto& a : arms) {
    csv.cell(a.batch_size).cell(a.error_pct);
    csv.end_row();
  }
}

json norm_summary(const std::vector<NormArm>& arms) {
  json j = json::object();
  for (const auto& a : arms) j[std::to_string(a.batch_size)] = a.error_pct;
  return j;
}

json run_curve(const ExperimentConfig& cfg, Emitter& em) {
  const nn::Model src = load_source(cfg);
  const Workbench wb = make_workbench(cfg, false);
  const AdaptCurveResult res = run_adapt_curve(cfg, src, wb);
  write_curve(em, "adapt_curve.csv", res.dua);
  write_stats(em, "adapt_curve_stats.csv", res.dua);
  {
    auto csv = em.open("adapt_curve_source.csv", {"k", "w_k", "error_pct"});
    for (const auto& r : res.dua.rows) {
      if (!r.error_pct) continue;
      csv.cell(r.k).precise(0.0).cell(res.source_error_pct);
      csv.end_row();
    }
  }
  json j{{"source_error_pct", res.source_error_pct}, {"dua", record_summary(res.dua)}};
  if (res.source_full_error_pct) j["source_full_error_pct"] = *res.source_full_error_pct;
  if (res.fixed) {
    write_curve(em, "adapt_curve_fixed.csv", *res.fixed);
    j["fixed"] = record_summary(*res.fixed);
  }
  if (!res.norm.empty()) {
    write_norm(em, res.norm);
    j["norm"] = norm_summary(res.norm);
  }
  return j;
}

json run_stability(const ExperimentConfig& cfg, Emitter& em) {
  const nn::Model src = load_source(cfg);
  const Workbench wb = make_workbench(cfg, false);
  const StabilityResult res = run_shuffle_stability(cfg, src, wb);
  {
    auto csv = em.open("stability.csv", {"run_id", "k", "error_pct"});
    for (const auto& r : res.rows) {
      csv.cell(r.run_id).cell(r.k).cell(r.error_pct);
      csv.end_row();
    }
  }
  auto csv = em.open("stability_summary.csv", {"k", "mean", "std"});
  json j = json::array();
  for (const auto& s : res.summary) {
    csv.cell(s.k).cell(s.mean).cell(s.std);
    csv.end_row();
    j.push_back({{"k", s.k}, {"mean", s.mean}, {"std", s.std}});
  }
  return {{"checkpoints", j}};
}

json run_omega(const ExperimentConfig& cfg, Emitter& em) {
  const nn::Model src = load_source(cfg);
  const Workbench wb = make_workbench(cfg, false);
  const OmegaSweepResult res = run_omega_sweep(cfg, src, wb);
  {
    auto csv = em.open("omega_sweep.csv", {"omega", "k", "w_k", "error_pct"});
    for (const auto& a : res.arms)
      for (const auto& r : a.record.rows) {
        if (!r.error_pct) continue;
        csv.precise(a.omega).cell(r.k).precise(r.w_k).cell(*r.error_pct);
        csv.end_row();
      }
  }
  {
    auto csv = em.open("omega_trajectory.csv", {"omega", "k", "mean_change"});
    for (const auto& a : res.arms)
      for (std::size_t k = 1; k <= a.record.mean_change.size(); ++k) {
        csv.precise(a.omega).cell(k).precise(a.record.mean_change[k - 1]);
        csv.end_row();
      }
  }
  auto csv = em.open("omega_stability.csv",
                     {"omega", "zeta", "stability_max", "stability_min", "settle_k",
                      "threshold", "final_error_pct"});
  json arms = json::array();
  for (const auto& a : res.arms) {
    csv.precise(a.omega).precise(a.zeta).precise(a.stability_max).precise(a.stability_min);
    csv.cell(a.settle_k).precise(res.threshold).cell(a.record.final_error_pct);
    csv.end_row();
    arms.push_back({{"omega", a.omega},
                    {"stability_max", a.stability_max},
                    {"settle_k", a.settle_k},
                    {"final_error_pct", a.record.final_error_pct}});
  }
  return {{"initial_shift", res.initial_shift}, {"threshold", res.threshold}, {"arms", arms}};
}

json run_ablation(const ExperimentConfig& cfg, Emitter& em) {
  const nn::Model src = load_source(cfg);
  const Workbench wb = make_workbench(cfg, false);
  auto csv = em.open("layer_ablation.csv", {"mask", "error_pct"});
  json j = json::object();
  for (const auto& r : run_layer_ablation(cfg, src, wb)) {
    csv.cell(r.mask).cell(r.error_pct);
    csv.end_row();
    j[r.mask] = r.error_pct;
  }
  return j;
}

json run_cycle_cmd(const ExperimentConfig& cfg, Emitter& em) {
  const nn::Model src = load_source(cfg);
  const Workbench wb = make_workbench(cfg, false);
  const CycleResult res = run_cycle(cfg, src, wb);
  auto csv = em.open("cycle.csv",
                     {"step", "segment", "domain", "k_in_segment", "w_k", "error_pct"});
  for (const auto& r : res.rows) {
    csv.cell(r.step).cell(r.segment).cell(std::string(r.corrupted ? "corrupt" : "clean"));
    csv.cell(r.k_in_segment).precise(r.w_k).cell(r.error_pct);
    csv.end_row();
  }
  return {{"source_clean_error_pct", res.source_clean_error_pct},
          {"source_corrupt_error_pct", res.source_corrupt_error_pct}};
}

json run_density(const ExperimentConfig& cfg, Emitter& em) {
  const nn::Model src = load_source(cfg);
  const Workbench wb = make_workbench(cfg, false);
  const DensityResult res = export_density(cfg, src, wb, cfg.density_layer);
  {
    auto csv = em.open("density.csv", {"layer", "channel", "bin_lo", "bin_hi", "count_clean",
                                       "count_shift", "count_adapted"});
    for (const auto& ch : res.channels)
      for (std::size_t b = 0; b + 1 < ch.bin_edges.size(); ++b) {
        csv.cell(res.layer).cell(ch.channel).precise(ch.bin_edges[b]).precise(ch.bin_edges[b + 1]);
        csv.cell(ch.count_clean[b]).cell(ch.count_shift[b]).cell(ch.count_adapted[b]);
        csv.end_row();
      }
  }
  auto csv = em.open("density_stats.csv",
                     {"layer", "channel", "mean_clean", "var_clean", "mean_shift", "var_shift",
                      "mean_adapted", "var_adapted", "w1_clean_readapted"});
  for (const auto& ch : res.channels) {
    csv.cell(res.layer).cell(ch.channel);
    csv.precise(ch.mean_clean).precise(ch.var_clean).precise(ch.mean_shift).precise(ch.var_shift);
    csv.precise(ch.mean_adapted).precise(ch.var_adapted).precise(ch.w1_clean_readapted);
    csv.end_row();
  }
  return {{"layer", res.layer},
          {"mean_abs_shift_unadapted", res.mean_abs_shift_unadapted},
          {"mean_abs_shift_adapted", res.mean_abs_shift_adapted},
          {"mean_w1_clean_readapted", res.mean_w1_clean_readapted}};
}

json run_norm_cmd(const ExperimentConfig& cfg, Emitter& em) {
  const nn::Model src = load_source(cfg);
  const Workbench wb = make_workbench(cfg, false);
  const auto arms = run_norm_baseline(cfg, src, wb);
  write_norm(em, arms);
  return {{"source_error_pct", error_pct(src, wb.eval_corrupt)}, {"norm", norm_summary(arms)}};
}

}  // namespace

json run_command(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Emitter em{fs::path(cfg.output_dir), config_hash(cfg)};
  try {
    fs::create_directories(em.dir);
  } catch (const fs::filesystem_error& e) {
    throw IoError(std::string("cannot create output directory: ") + e.what());
  }

  json summary;
  switch (cfg.command) {
    case Command::train: summary = run_train(cfg, em); break;
    case Command::eval: summary = run_eval(cfg, em); break;
    case Command::adapt_curve: summary = run_curve(cfg, em); break;
    case Command::shuffle_stability: summary = run_stability(cfg, em); break;
    case Command::omega_sweep: summary = run_omega(cfg, em); break;
    case Command::layer_ablation: summary = run_ablation(cfg, em); break;
    case Command::cycle: summary = run_cycle_cmd(cfg, em); break;
    case Command::density: summary = run_density(cfg, em); break;
    case Command::norm_baseline: summary = run_norm_cmd(cfg, em); break;
  }

  json manifest{
      {"command", std::string(to_string(cfg.command))},
      {"config", to_json(cfg)},
      {"config_hash", em.hash},
      {"seed", cfg.seed},
      {"code_version", DUA_VERSION},
      {"wall_time_s",
       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
      {"artifacts", em.artifacts},
      {"severity_table", shift::severity_manifest()},
      {"summary", summary},
  };
  std::ofstream out(em.dir / "manifest.json", std::ios::trunc);
  if (!out) throw IoError("cannot write manifest in " + em.dir.string());
  out << manifest.dump(2) << '\n';
  return manifest;
}

}  // namespace dua::harness
