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

#include <cstdint>
#include <span>
#include <vector>

#include "photomesh/mesh.hpp"
#include "photomesh/unitary.hpp"

namespace photomesh {

/// Infidelity 1 - F(U, mesh(x)) as a smooth function of the flat variable
/// vector x = [theta_0, phi_0, theta_1, phi_1, ..., delta_0, ..., delta_{N-1}].
///
/// Node reflectivities enter through the mixing angle, R = cos^2(theta) with
/// theta in [0, pi/2], which keeps the node block analytic at R = 0 and
/// R = 1. A reflectivity box [Rmin, Rmax] maps to the angle box
/// [acos(sqrt(Rmax)), acos(sqrt(Rmin))].
class FidelityObjective {
 public:
  FidelityObjective(UnitaryMatrix target, MeshLayout layout);

  std::size_t size() const noexcept { return 2 * layout_.size() + layout_.n_modes(); }
  const MeshLayout &layout() const noexcept { return layout_; }

  double value(std::span<const double> x) const;
  /// Returns the value and writes the analytic gradient into `grad`.
  double value_and_gradient(std::span<const double> x, std::span<double> grad) const;

  std::vector<double> encode(const MeshSettings &settings) const;
  /// Phases are wrapped; reflectivities are cos^2(theta).
  MeshSettings decode(std::span<const double> x) const;

  /// Angle-space bounds for a hardware sample; phases are unbounded.
  void bounds(const HardwareSample &hw, std::vector<double> &lower,
              std::vector<double> &upper) const;

 private:
  UnitaryMatrix target_;
  MeshLayout layout_;
};

struct OptimizerOptions {
  int max_iters = 2000;
  double tol = 1e-14;
  /// Extra runs started from the incumbent with all phases perturbed. They
  /// escape the zero-gradient saddles created by phase-symmetric starts
  /// (e.g. a redundant node at phi = 0). Only improvements are kept.
  int restarts = 4;
  double restart_phase_kick = 0.3;
  std::uint64_t restart_seed = 0;
};

struct OptimizationResult {
  MeshSettings settings;
  double fidelity_before = 0.0;
  double fidelity_after = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Infidelity of the incumbent at the start and after every accepted step
  /// of the first run, followed by every improving restart.
  std::vector<double> objective_trace;
};

/// Start point for a square mesh with redundant output-side layers: the
/// clipped rectangular decomposition in the first n layers, every extra node
/// at its most reflective achievable setting with zero phase.
MeshSettings initial_guess_redundant(const UnitaryMatrix &u, const MeshLayout &layout,
                                     const HardwareSample &hw);

/// Restricts a hardware sample to the nodes of another layout sharing the
/// same (layer, top_mode) positions.
HardwareSample restrict_hardware(const HardwareSample &hw, const MeshLayout &layout);

/// Box-constrained quasi-Newton minimization of the infidelity over all node
/// reflectivities, node phases and output phases. Never returns a point worse
/// than `start`. Deterministic for fixed inputs and options.
OptimizationResult optimize_settings(const UnitaryMatrix &u, const MeshLayout &layout,
                                     const HardwareSample &hw, const MeshSettings &start,
                                     const OptimizerOptions &options = {});

/// (1 - before) / (1 - after). Equal inputs give 1; an `after` infidelity
/// below 1e-15 gives +infinity, or 1 if `before` is that close to perfect too.
double enhancement_ratio(double fidelity_before, double fidelity_after) noexcept;

}  // namespace photomesh
