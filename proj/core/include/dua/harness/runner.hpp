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

#ifndef DUA_HARNESS_RUNNER_HPP_
#define DUA_HARNESS_RUNNER_HPP_

#include <json.hpp>

#include "dua/harness/config.hpp"

namespace dua::harness {

/// Runs `cfg.command`, writes its CSV artifacts and manifest.json into
/// cfg.output_dir and returns the manifest. The source checkpoint is only
/// ever written by the train command.
nlohmann::json run_command(const ExperimentConfig& cfg);

}  // namespace dua::harness

#endif  // DUA_HARNESS_RUNNER_HPP_
