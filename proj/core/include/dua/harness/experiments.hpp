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

#ifndef DUA_HARNESS_EXPERIMENTS_HPP_
#define DUA_HARNESS_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dua/adapt.hpp"
#include "dua/dataset.hpp"
#include "dua/harness/config.hpp"
#include "dua/harness/data.hpp"
#include "dua/model.hpp"

namespace dua::harness {

/// State after k adaptation steps; k = 0 is the untouched source model.
struct StepRow {
  std::size_t k = 0;
  double w_k = 0.0;                   ///< 0 at k = 0
  std::optional<double> error_pct;    ///< set on evaluated steps only
  std::uint64_t stat_hash = 0;        ///< running-stat snapshot
};

/// One adaptation arm over a sample stream.
struct ExperimentRecord {
  std::string arm;
  std::vector<StepRow> rows;  ///< k = 0..n
  double final_error_pct = 0.0;
  std::optional<double> final_full_error_pct;
  std::size_t samples_used = 0;
  double wall_time_s = 0.0;
  /// Running mean of the last BN layer before any step.
  std::vector<double> initial_mean;
  /// ||mu_k - mu_{k-1}|| of the last BN running mean; entry k-1 is step k.
  std::vector<double> mean_change;
};

/// Which stream to feed and where to score it.
struct StreamSpec {
  const shift::Dataset* data = nullptr;  ///< samples are drawn from here
  std::vector<std::size_t> indices;      ///< stream order
  const shift::Dataset* eval = nullptr;
  std::size_t eval_every = 1;            ///< 0: only k = 0, k = n and extras
  std::vector<std::size_t> eval_points;  ///< extra steps always evaluated
  bool fixed_momentum = false;
  const shift::Dataset* full_eval = nullptr;  ///< scored once after step n
};

/// Adapts a private copy of `source` along the stream.
ExperimentRecord run_stream(const nn::Model& source, adapt::AdaptConfig cfg,
                            const StreamSpec& spec, std::string arm);

/// Adaptation config from the experiment config with a derived seed.
adapt::AdaptConfig adapt_config_for(const ExperimentConfig& cfg,
                                    std::string_view purpose);

struct NormArm {
  std::size_t batch_size = 0;
  double error_pct = 0.0;          ///< mean over draws
  std::vector<double> draw_errors;
};

/// NORM baseline: recompute statistics on disjoint pool batches of each
/// size and score the eval slice; averaged over `draws` batches.
std::vector<NormArm> run_norm_baseline(const ExperimentConfig& cfg,
                                       const nn::Model& source,
                                       const Workbench& wb,
                                       std::size_t draws = 5);

struct AdaptCurveResult {
  double source_error_pct = 0.0;
  std::optional<double> source_full_error_pct;
  ExperimentRecord dua;
  std::optional<ExperimentRecord> fixed;
  std::vector<NormArm> norm;
};

AdaptCurveResult run_adapt_curve(const ExperimentConfig& cfg,
                                 const nn::Model& source, const Workbench& wb);

struct StabilityRow {
  std::size_t run_id = 0;
  std::size_t k = 0;
  double error_pct = 0.0;
};

struct StabilitySummary {
  std::size_t k = 0;
  double mean = 0.0;
  double std = 0.0;
};

struct StabilityResult {
  std::vector<StabilityRow> rows;  ///< ordered by run_id, then k
  std::vector<StabilitySummary> summary;
};

StabilityResult run_shuffle_stability(const ExperimentConfig& cfg,
                                      const nn::Model& source,
                                      const Workbench& wb);

struct OmegaArm {
  double omega = 0.0;
  double zeta = 0.0;
  ExperimentRecord record;
  /// Max / min over k > 50 of the last-layer running-mean change.
  double stability_max = 0.0;
  double stability_min = 0.0;
  /// First k after which every change stays below the threshold
  /// (n + 1 if never).
  std::size_t settle_k = 0;
};

struct OmegaSweepResult {
  /// ||mu_target - mu_source|| at the last BN layer, where mu_target is a
  /// NORM recompute over 512 pool samples.
  double initial_shift = 0.0;
  double threshold = 0.0;  ///< 0.05 * initial_shift
  std::vector<OmegaArm> arms;
};

OmegaSweepResult run_omega_sweep(const ExperimentConfig& cfg,
                                 const nn::Model& source, const Workbench& wb);

struct AblationRow {
  std::string mask;  ///< "none", a BN name, or "all"
  double error_pct = 0.0;
};

std::vector<AblationRow> run_layer_ablation(const ExperimentConfig& cfg,
                                            const nn::Model& source,
                                            const Workbench& wb);

struct CycleRow {
  std::size_t step = 0;          ///< global samples consumed
  std::size_t segment = 0;
  bool corrupted = false;
  std::size_t k_in_segment = 0;  ///< samples consumed in this segment
  double w_k = 0.0;
  double error_pct = 0.0;        ///< on the current domain's eval slice
};

struct CycleResult {
  double source_clean_error_pct = 0.0;
  double source_corrupt_error_pct = 0.0;
  std::vector<CycleRow> rows;
};

/// Steps at k_in_segment in {0, 50, segment end} are always evaluated.
CycleResult run_cycle(const ExperimentConfig& cfg, const nn::Model& source,
                      const Workbench& wb);

struct ChannelDensity {
  std::size_t channel = 0;
  std::vector<double> bin_edges;  ///< bins + 1 values
  std::vector<std::size_t> count_clean;
  std::vector<std::size_t> count_shift;
  std::vector<std::size_t> count_adapted;
  double mean_clean = 0.0, var_clean = 0.0;
  double mean_shift = 0.0, var_shift = 0.0;
  double mean_adapted = 0.0, var_adapted = 0.0;
  /// W1 between clean outputs under source stats and after adapting on
  /// clean samples.
  double w1_clean_readapted = 0.0;
  std::size_t samples = 0;  ///< values per channel in each set
};

struct DensityResult {
  std::string layer;
  std::vector<ChannelDensity> channels;
  double mean_abs_shift_unadapted = 0.0;
  double mean_abs_shift_adapted = 0.0;
  double mean_w1_clean_readapted = 0.0;
};

/// Throws ParameterError for an unknown layer name.
DensityResult export_density(const ExperimentConfig& cfg,
                             const nn::Model& source, const Workbench& wb,
                             const std::string& layer);

struct EvalRow {
  std::string corruption;
  int severity = 0;
  double error_pct = 0.0;
};

/// Source error on the eval slice for every corruption and severity.
std::vector<EvalRow> run_eval_table(const ExperimentConfig& cfg,
                                    const nn::Model& source,
                                    const Workbench& wb);

}  // namespace dua::harness

#endif  // DUA_HARNESS_EXPERIMENTS_HPP_
