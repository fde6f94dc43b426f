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

#include "dua/harness/config.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <utility>

#include "dua/error.hpp"
#include "dua/rng.hpp"

namespace dua::harness {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<Command, std::string_view>, 9> kCommands = {{
    {Command::train, "train"},
    {Command::eval, "eval"},
    {Command::adapt_curve, "adapt-curve"},
    {Command::shuffle_stability, "shuffle-stability"},
    {Command::omega_sweep, "omega-sweep"},
    {Command::layer_ablation, "layer-ablation"},
    {Command::cycle, "cycle"},
    {Command::density, "density"},
    {Command::norm_baseline, "norm-baseline"},
}};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "command",          "dataset",          "mnist_dir",
      "n_train",          "n_test",           "corruption",
      "severity",         "batch_size",       "augmentations",
      "layer_mask",       "rho0",             "omega",
      "zeta",             "adapt_normalization", "n_adapt_samples",
      "n_runs",           "seed",             "output_dir",
      "checkpoint",       "eval_slice",       "eval_every",
      "full_eval",        "epochs",           "lr",
      "sgd_momentum",     "train_batch_size", "omegas",
      "cycle",            "density_layer",    "density_samples",
      "density_bins",     "norm_batch_sizes", "fixed_arm",
      "norm_arm",         "stability_checkpoints", "identical_run_seeds",
      "threads",          "train_augmentations",
  };
  return keys;
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = get_as<T>(j, key);
}

std::string segment_name(const CycleSegment& s) {
  return std::string(s.corrupted ? "corrupt" : "clean") + ":" +
         std::to_string(s.samples);
}

CycleSegment parse_segment(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw ConfigError("cycle segment '" + s + "' is not domain:samples");
  const std::string domain = s.substr(0, colon);
  CycleSegment seg;
  if (domain == "corrupt") {
    seg.corrupted = true;
  } else if (domain != "clean") {
    throw ConfigError("cycle domain must be clean or corrupt, got '" + domain +
                      "'");
  }
  try {
    std::size_t used = 0;
    seg.samples = std::stoull(s.substr(colon + 1), &used);
    if (used != s.size() - colon - 1) throw std::invalid_argument("tail");
  } catch (const std::logic_error&) {
    throw ConfigError("bad sample count in cycle segment '" + s + "'");
  }
  return seg;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "?";
}

Command parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommands)
    if (n == name) return cmd;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (dataset != "synthetic" && dataset != "mnist")
    throw ConfigError("dataset must be synthetic or mnist");
  try {
    corruption.validate();
    adapt.schedule.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (adapt.batch_size == 0) throw ConfigError("batch_size must be positive");
  if (n_test == 0) throw ConfigError("n_test must be positive");
  if (eval_slice == 0 || eval_slice >= n_test)
    throw ConfigError("eval_slice must be in [1, n_test)");
  if (n_adapt_samples > n_test - eval_slice)
    throw ConfigError("n_adapt_samples exceeds the adaptation pool (n_test - "
                      "eval_slice)");
  if (command == Command::shuffle_stability && n_runs < 2)
    throw ConfigError("shuffle-stability needs n_runs >= 2");
  if (train.epochs == 0 || train.batch_size < 2 || train.n_train < 2)
    throw ConfigError("training needs epochs >= 1, batch and set size >= 2");
  if (!(train.lr > 0.0) || !(train.momentum >= 0.0 && train.momentum < 1.0))
    throw ConfigError("need lr > 0 and 0 <= sgd_momentum < 1");
  if (omegas.empty()) throw ConfigError("omegas must not be empty");
  for (double w : omegas)
    if (!(w > 0.0 && w <= 1.0)) throw ConfigError("each omega must be in (0, 1]");
  if (cycle.empty()) throw ConfigError("cycle must have at least one segment");
  std::size_t clean_total = 0;
  std::size_t corrupt_total = 0;
  for (const auto& s : cycle) (s.corrupted ? corrupt_total : clean_total) += s.samples;
  if (std::max(clean_total, corrupt_total) > n_test - eval_slice)
    throw ConfigError("cycle needs more samples of one domain than the pool holds");
  if (density_samples == 0) throw ConfigError("density_samples must be positive");
  if (density_bins == 0) throw ConfigError("density_bins must be positive");
  for (std::size_t b : norm_batch_sizes)
    if (b < 2) throw ConfigError("norm batch sizes must be >= 2");
  for (std::size_t k : stability_checkpoints)
    if (k > n_test - eval_slice)
      throw ConfigError("stability checkpoints must fit in the adaptation pool");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = std::string(to_string(c.command));
  j["dataset"] = c.dataset;
  j["mnist_dir"] = c.mnist_dir;
  j["n_train"] = c.train.n_train;
  j["n_test"] = c.n_test;
  j["corruption"] = std::string(shift::to_string(c.corruption.kind));
  j["severity"] = c.corruption.severity;
  j["batch_size"] = c.adapt.batch_size;
  j["augmentations"] = c.adapt.augmentations.names();
  if (c.adapt.layer_mask) {
    j["layer_mask"] = *c.adapt.layer_mask;
  } else {
    j["layer_mask"] = nullptr;
  }
  j["rho0"] = c.adapt.schedule.rho0;
  j["omega"] = c.adapt.schedule.omega;
  j["zeta"] = c.adapt.schedule.zeta;
  j["adapt_normalization"] =
      c.adapt.normalization == bn::AdaptNormalization::post_update
          ? "post_update"
          : "pre_update";
  j["n_adapt_samples"] = c.n_adapt_samples;
  j["n_runs"] = c.n_runs;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["checkpoint"] = c.checkpoint;
  j["eval_slice"] = c.eval_slice;
  j["eval_every"] = c.eval_every;
  j["full_eval"] = c.full_eval;
  j["epochs"] = c.train.epochs;
  j["lr"] = c.train.lr;
  j["sgd_momentum"] = c.train.momentum;
  j["train_batch_size"] = c.train.batch_size;
  j["train_augmentations"] = c.train.augmentations.names();
  j["omegas"] = c.omegas;
  json segs = json::array();
  for (const auto& s : c.cycle) segs.push_back(segment_name(s));
  j["cycle"] = segs;
  j["density_layer"] = c.density_layer;
  j["density_samples"] = c.density_samples;
  j["density_bins"] = c.density_bins;
  j["norm_batch_sizes"] = c.norm_batch_sizes;
  j["fixed_arm"] = c.fixed_arm;
  j["norm_arm"] = c.norm_arm;
  j["stability_checkpoints"] = c.stability_checkpoints;
  j["identical_run_seeds"] = c.identical_run_seeds;
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known_keys().contains(key))
      throw ConfigError("unknown config key '" + key + "'");

  if (j.contains("command"))
    c.command = parse_command(get_as<std::string>(j, "command"));
  read(j, "dataset", c.dataset);
  read(j, "mnist_dir", c.mnist_dir);
  read(j, "n_train", c.train.n_train);
  read(j, "n_test", c.n_test);
  if (j.contains("corruption")) {
    try {
      c.corruption.kind =
          shift::parse_corruption(get_as<std::string>(j, "corruption"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  read(j, "severity", c.corruption.severity);
  read(j, "batch_size", c.adapt.batch_size);
  if (j.contains("augmentations")) {
    try {
      c.adapt.augmentations = shift::AugmentSet::parse(
          get_as<std::vector<std::string>>(j, "augmentations"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("layer_mask")) {
    if (j.at("layer_mask").is_null()) {
      c.adapt.layer_mask.reset();
    } else {
      c.adapt.layer_mask = get_as<std::vector<std::string>>(j, "layer_mask");
    }
  }
  read(j, "rho0", c.adapt.schedule.rho0);
  read(j, "omega", c.adapt.schedule.omega);
  read(j, "zeta", c.adapt.schedule.zeta);
  c.adapt.schedule.rho_k = c.adapt.schedule.rho0;
  c.adapt.schedule.k = 0;
  if (j.contains("adapt_normalization")) {
    const auto s = get_as<std::string>(j, "adapt_normalization");
    if (s == "post_update") {
      c.adapt.normalization = bn::AdaptNormalization::post_update;
    } else if (s == "pre_update") {
      c.adapt.normalization = bn::AdaptNormalization::pre_update;
    } else {
      throw ConfigError("adapt_normalization must be post_update or pre_update");
    }
  }
  read(j, "n_adapt_samples", c.n_adapt_samples);
  read(j, "n_runs", c.n_runs);
  read(j, "seed", c.seed);
  read(j, "output_dir", c.output_dir);
  read(j, "checkpoint", c.checkpoint);
  read(j, "eval_slice", c.eval_slice);
  read(j, "eval_every", c.eval_every);
  read(j, "full_eval", c.full_eval);
  read(j, "epochs", c.train.epochs);
  read(j, "lr", c.train.lr);
  read(j, "sgd_momentum", c.train.momentum);
  read(j, "train_batch_size", c.train.batch_size);
  if (j.contains("train_augmentations")) {
    try {
      c.train.augmentations = shift::AugmentSet::parse(
          get_as<std::vector<std::string>>(j, "train_augmentations"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  read(j, "omegas", c.omegas);
  if (j.contains("cycle")) {
    c.cycle.clear();
    for (const auto& s : get_as<std::vector<std::string>>(j, "cycle"))
      c.cycle.push_back(parse_segment(s));
  }
  read(j, "density_layer", c.density_layer);
  read(j, "density_samples", c.density_samples);
  read(j, "density_bins", c.density_bins);
  read(j, "norm_batch_sizes", c.norm_batch_sizes);
  read(j, "fixed_arm", c.fixed_arm);
  read(j, "norm_arm", c.norm_arm);
  read(j, "stability_checkpoints", c.stability_checkpoints);
  read(j, "identical_run_seeds", c.identical_run_seeds);
  read(j, "threads", c.threads);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " +
                      e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Where results go and how many threads compute them leave the results
  // unchanged, so neither enters the hash.
  nlohmann::json j = to_json(cfg);
  j.erase("output_dir");
  j.erase("threads");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) {
  return splitmix64(seed ^ fnv1a(purpose));
}

}  // namespace dua::harness
