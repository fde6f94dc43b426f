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

#include "dua_tools/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "dua/error.hpp"
#include "dua/harness/config.hpp"
#include "dua/harness/runner.hpp"

namespace dua::tools {
namespace {

using nlohmann::json;

constexpr const char* kCommands[] = {
    "train", "eval", "adapt-curve", "shuffle-stability", "omega-sweep",
    "layer-ablation", "cycle", "density", "norm-baseline",
};

/// Flag values that were actually given; each lands on the same-named key.
struct Overrides {
  std::optional<std::string> dataset, mnist_dir, corruption, output_dir,
      checkpoint, layer, normalization;
  std::optional<int> severity;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_adapt_samples, n_runs, batch_size, eval_every,
      eval_slice, n_test, n_train, epochs, threads;
  std::optional<double> rho0, omega, zeta;
  std::optional<std::vector<std::string>> augmentations, layer_mask;
  std::optional<std::vector<double>> omegas;

  void apply(json& j) const {
    auto put = [&j](const char* key, const auto& v) {
      if (v) j[key] = *v;
    };
    put("dataset", dataset);
    put("mnist_dir", mnist_dir);
    put("corruption", corruption);
    put("output_dir", output_dir);
    put("checkpoint", checkpoint);
    put("density_layer", layer);
    put("adapt_normalization", normalization);
    put("severity", severity);
    put("seed", seed);
    put("n_adapt_samples", n_adapt_samples);
    put("n_runs", n_runs);
    put("batch_size", batch_size);
    put("eval_every", eval_every);
    put("eval_slice", eval_slice);
    put("n_test", n_test);
    put("n_train", n_train);
    put("epochs", epochs);
    put("threads", threads);
    put("rho0", rho0);
    put("omega", omega);
    put("zeta", zeta);
    put("augmentations", augmentations);
    put("layer_mask", layer_mask);
    put("omegas", omegas);
  }
};

template <typename T>
void flag(CLI::App& app, const std::string& name, std::optional<T>& target,
          const std::string& help) {
  app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

void add_flags(CLI::App& sub, Overrides& o) {
  flag(sub, "--dataset", o.dataset, "synthetic or mnist");
  flag(sub, "--mnist-dir", o.mnist_dir, "directory holding the IDX files");
  flag(sub, "--corruption", o.corruption, "corruption name");
  flag(sub, "--severity", o.severity, "corruption severity 0..5");
  flag(sub, "--seed", o.seed, "run seed");
  flag(sub, "--output-dir", o.output_dir, "artifact directory");
  flag(sub, "--checkpoint", o.checkpoint, "source checkpoint path");
  flag(sub, "--layer", o.layer, "BN layer for density export");
  flag(sub, "--adapt-normalization", o.normalization, "post_update or pre_update");
  flag(sub, "--n-adapt-samples", o.n_adapt_samples, "adaptation stream length");
  flag(sub, "--n-runs", o.n_runs, "shuffle-stability runs");
  flag(sub, "--batch-size", o.batch_size, "augmented batch size");
  flag(sub, "--eval-every", o.eval_every, "evaluation stride in steps");
  flag(sub, "--eval-slice", o.eval_slice, "held-out evaluation slice size");
  flag(sub, "--n-test", o.n_test, "test-set size");
  flag(sub, "--n-train", o.n_train, "training-set size");
  flag(sub, "--epochs", o.epochs, "training epochs");
  flag(sub, "--threads", o.threads, "worker threads, 0 for all cores");
  flag(sub, "--rho0", o.rho0, "initial momentum");
  flag(sub, "--omega", o.omega, "momentum decay");
  flag(sub, "--zeta", o.zeta, "momentum floor");
  flag(sub, "--augmentations", o.augmentations, "subset of hflip crop rot90s");
  flag(sub, "--layer-mask", o.layer_mask, "BN layers to adapt");
  flag(sub, "--omegas", o.omegas, "omega values for the sweep");
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Test-time adaptation of batch-norm statistics: experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DUA_VERSION);
  std::string config_path;
  bool quiet = false;
  Overrides overrides;
  for (const char* name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, std::string("run ") + name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_flag("--quiet,-q", quiet, "do not print the run summary");
    add_flags(*sub, overrides);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    json j = config_path.empty() ? json::object() : read_config_file(config_path);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    j["command"] = app.get_subcommands().front()->get_name();
    overrides.apply(j);
    const harness::ExperimentConfig cfg = harness::config_from_json(j);
    const json manifest = harness::run_command(cfg);
    if (!quiet) std::cout << manifest.at("summary").dump(2) << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace dua::tools
