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

#include "json.hpp"

#include "photomesh/mesh.hpp"
#include "photomesh/unitary.hpp"

namespace photomesh::io {

using nlohmann::json;

// Matrix files: {"n": N, "re": [[...]], "im": [[...]]}, row-major.
json matrix_to_json(const UnitaryMatrix &u);
/// Validates shape and unitarity (1e-8); throws NotUnitaryError with the
/// measured deviation, or Parse on malformed content.
UnitaryMatrix matrix_from_json(const json &j);

// Settings files: {"kind", "n", "extra_layers", "nodes": [{"layer", "slot",
// "top_mode", "R", "phi"}, ...], "output_phases": [...]}.
json settings_to_json(const MeshSettings &s);
MeshSettings settings_from_json(const json &j);

// Hardware files mirror settings, with per-node "r1", "r2", "Rmin", "Rmax"
// and top-level "sigma", "seed".
json hardware_to_json(const HardwareSample &hw);
HardwareSample hardware_from_json(const json &j);

/// Reads and parses a JSON file. Io on open/read failure, Parse on bad JSON.
json read_json_file(const std::filesystem::path &path);
/// Writes `j` indented by two spaces with a trailing newline.
void write_json_file(const std::filesystem::path &path, const json &j);
void write_text_file(const std::filesystem::path &path, const std::string &text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace photomesh::io
