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

#include "photomesh/mesh.hpp"
#include "photomesh/unitary.hpp"

namespace photomesh {

/// Rectangular decomposition onto MeshLayout::square(n). Lower-triangular
/// entries are nulled along anti-diagonals, alternating column operations
/// (input-side nodes) and row operations (output-side nodes); the row
/// operations are then commuted through the residual diagonal.
MeshSettings clements_decompose(const UnitaryMatrix &u);

/// Triangular decomposition onto MeshLayout::triangular(n), nulling one row
/// at a time from the bottom with column operations only.
MeshSettings reck_decompose(const UnitaryMatrix &u);

MeshSettings decompose(const UnitaryMatrix &u, MeshKind kind);

struct ClipResult {
  MeshSettings settings;
  int n_clipped = 0;
};

/// Clamps each node reflectivity into its hardware range. Phases are left
/// untouched.
ClipResult clip_to_hardware(const MeshSettings &settings, const HardwareSample &hw);

struct Evaluation {
  double fidelity = 1.0;
  bool affected = false;
  int n_clipped = 0;
  DeviationReport deviation;
};

/// Decompose, clip to `hw`, reconstruct and compare with the target.
Evaluation decompose_clip_evaluate(const UnitaryMatrix &u, MeshKind kind,
                                   const HardwareSample &hw);

}  // namespace photomesh
