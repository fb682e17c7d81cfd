// Copyright 2026 The photomesh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace photomesh {

/// Build identifier embedded in every sidecar and printed by --version.
const char *build_identifier() noexcept;

/// Experiment names accepted by run_experiment: fig2, fig3, fig4, fourier.
bool is_experiment_name(std::string_view name) noexcept;

/// Default configuration of a named experiment.
nlohmann::json default_experiment_config(std::string_view name);

/// Merges `overrides` onto the defaults and validates every field. Errors
/// are InvalidArgument with messages that start with the field path.
nlohmann::json resolve_experiment_config(std::string_view name, const nlohmann::json &overrides);

struct ExperimentOutput {
  std::vector<std::filesystem::path> files;
  std::string summary;  // one line, no trailing newline
};

/// Runs a resolved or partial config and writes <name>.csv plus the
/// <name>.json sidecar into `out_dir`, creating it if needed.
ExperimentOutput run_experiment(std::string_view name, const nlohmann::json &config,
                                const std::filesystem::path &out_dir, int jobs = 1);

}  // namespace photomesh
