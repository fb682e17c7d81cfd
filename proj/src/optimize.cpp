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

#include "photomesh/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "photomesh/box_minimizer.hpp"
#include "photomesh/decompose.hpp"
#include "photomesh/error.hpp"

namespace photomesh {

namespace {

constexpr Complex kI{0.0, 1.0};
// Reflectivity slack tolerated when checking that a start point is feasible.
constexpr double kFeasibilitySlack = 1e-12;

double angle_for_reflectivity(double r) {
  return std::acos(std::sqrt(std::clamp(r, 0.0, 1.0)));
}

Eigen::Matrix2cd angle_block(double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  Eigen::Matrix2cd t;
  t << e * c, -s, e * s, c;
  return t;
}

}  // namespace

FidelityObjective::FidelityObjective(UnitaryMatrix target, MeshLayout layout)
    : target_(std::move(target)), layout_(std::move(layout)) {
  if (target_.dim() != layout_.n_modes()) {
    std::ostringstream msg;
    msg << "target has dimension " << target_.dim() << " but the layout has "
        << layout_.n_modes() << " modes";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

double FidelityObjective::value(std::span<const double> x) const {
  std::vector<double> scratch(size());
  return value_and_gradient(x, scratch);
}

double FidelityObjective::value_and_gradient(std::span<const double> x,
                                             std::span<double> grad) const {
  if (x.size() != size() || grad.size() != size())
    throw Error(ErrorCode::InvalidArgument, "objective: variable vector has wrong size");
  const int n = layout_.n_modes();
  const auto &ids = layout_.nodes();
  const std::size_t k_nodes = ids.size();
  const std::size_t phase_base = 2 * k_nodes;

  std::vector<Eigen::Matrix2cd> blocks(k_nodes);
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  for (std::size_t k = 0; k < k_nodes; ++k) {
    blocks[k] = angle_block(x[2 * k], x[2 * k + 1]);
    apply_rows(m, ids[k].top_mode, blocks[k]);
  }

  // t = Tr(U^dagger D M) = sum_i e^{i delta_i} sum_j conj(U_ij) M_ij.
  const ComplexMatrix &u = target_.matrix();
  Eigen::VectorXcd row_overlap(n);
  Complex t = 0.0;
  for (int i = 0; i < n; ++i) {
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) acc += std::conj(u(i, j)) * m(i, j);
    row_overlap(i) = acc;
    t += std::polar(1.0, x[phase_base + i]) * acc;
  }
  const double nn = static_cast<double>(n) * n;
  const double value = 1.0 - std::norm(t) / nn;
  // d(1 - |t|^2/N^2) = -2 Re(conj(t) dt) / N^2
  auto accumulate = [&](Complex dt) { return -2.0 * std::real(std::conj(t) * dt) / nn; };

  for (int i = 0; i < n; ++i)
    grad[phase_base + i] = accumulate(kI * std::polar(1.0, x[phase_base + i]) * row_overlap(i));

  if (k_nodes > 0) {
    // With W = U^dagger D and t = Tr(W T_K ... T_1), the derivative with
    // respect to a parameter of T_k is Tr(Q_k dT_k), where
    // Q_k = (T_{k-1} ... T_1)(W T_K ... T_{k+1}). Q_1 = W M T_1^-1 and
    // Q_{k+1} = T_k Q_k T_{k+1}^-1.
    ComplexMatrix w = u.adjoint();
    for (int i = 0; i < n; ++i) w.col(i) *= std::polar(1.0, x[phase_base + i]);
    ComplexMatrix q = w * m;
    apply_cols(q, ids[0].top_mode, blocks[0].adjoint());

    for (std::size_t k = 0; k < k_nodes; ++k) {
      const int a = ids[k].top_mode;
      const double theta = x[2 * k];
      const double phi = x[2 * k + 1];
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const Complex e = std::polar(1.0, phi);
      Eigen::Matrix2cd d_theta;
      d_theta << -e * s, -c, e * c, -s;
      Eigen::Matrix2cd d_phi;
      d_phi << kI * e * c, 0.0, kI * e * s, 0.0;
      const Eigen::Matrix2cd qb = q.block<2, 2>(a, a);
      // Tr(Q dT) over the 2x2 block: sum_{r,c} Q[c, r] dT[r, c].
      grad[2 * k] = accumulate((qb.transpose().cwiseProduct(d_theta)).sum());
      grad[2 * k + 1] = accumulate((qb.transpose().cwiseProduct(d_phi)).sum());

      if (k + 1 < k_nodes) {
        apply_rows(q, a, blocks[k]);
        apply_cols(q, ids[k + 1].top_mode, blocks[k + 1].adjoint());
      }
    }
  }
  return value;
}

std::vector<double> FidelityObjective::encode(const MeshSettings &settings) const {
  if (!(settings.layout == layout_))
    throw Error(ErrorCode::LayoutMismatch, "settings layout differs from objective layout");
  settings.validate();
  std::vector<double> x(size());
  for (std::size_t k = 0; k < settings.nodes.size(); ++k) {
    x[2 * k] = angle_for_reflectivity(settings.nodes[k].reflectivity);
    x[2 * k + 1] = settings.nodes[k].phase;
  }
  const std::size_t base = 2 * settings.nodes.size();
  for (std::size_t i = 0; i < settings.output_phases.size(); ++i)
    x[base + i] = settings.output_phases[i];
  return x;
}

MeshSettings FidelityObjective::decode(std::span<const double> x) const {
  if (x.size() != size())
    throw Error(ErrorCode::InvalidArgument, "decode: variable vector has wrong size");
  MeshSettings settings = identity_settings(layout_);
  for (std::size_t k = 0; k < settings.nodes.size(); ++k) {
    const double c = std::cos(x[2 * k]);
    settings.nodes[k] = {std::clamp(c * c, 0.0, 1.0), wrap_phase(x[2 * k + 1])};
  }
  const std::size_t base = 2 * settings.nodes.size();
  for (std::size_t i = 0; i < settings.output_phases.size(); ++i)
    settings.output_phases[i] = wrap_phase(x[base + i]);
  return settings;
}

void FidelityObjective::bounds(const HardwareSample &hw, std::vector<double> &lower,
                               std::vector<double> &upper) const {
  if (!(hw.layout == layout_))
    throw Error(ErrorCode::LayoutMismatch, "hardware layout differs from objective layout");
  constexpr double inf = std::numeric_limits<double>::infinity();
  lower.assign(size(), -inf);
  upper.assign(size(), inf);
  for (std::size_t k = 0; k < hw.nodes.size(); ++k) {
    lower[2 * k] = angle_for_reflectivity(hw.nodes[k].range.max);
    upper[2 * k] = angle_for_reflectivity(hw.nodes[k].range.min);
  }
}

HardwareSample restrict_hardware(const HardwareSample &hw, const MeshLayout &layout) {
  HardwareSample out{layout, hw.sigma, hw.seed, {}};
  out.nodes.reserve(layout.size());
  for (const NodeId &id : layout.nodes()) {
    const int idx = hw.layout.find(id.layer, id.top_mode);
    if (idx < 0)
      throw Error(ErrorCode::LayoutMismatch,
                  "hardware sample has no node at a position of the requested layout");
    out.nodes.push_back(hw.nodes[idx]);
  }
  return out;
}

MeshSettings initial_guess_redundant(const UnitaryMatrix &u, const MeshLayout &layout,
                                     const HardwareSample &hw) {
  if (layout.kind() != MeshKind::Square)
    throw Error(ErrorCode::InvalidArgument,
                "redundant initial guess requires a square layout");
  if (!(hw.layout == layout))
    throw Error(ErrorCode::LayoutMismatch, "hardware sample was drawn for a different layout");
  if (u.dim() != layout.n_modes())
    throw Error(ErrorCode::DimensionMismatch, "target dimension differs from layout");

  const MeshLayout base = MeshLayout::square(layout.n_modes());
  const ClipResult clipped =
      clip_to_hardware(clements_decompose(u), restrict_hardware(hw, base));

  MeshSettings guess = identity_settings(layout);
  guess.output_phases = clipped.settings.output_phases;
  for (std::size_t k = 0; k < layout.size(); ++k) {
    const NodeId &id = layout.nodes()[k];
    const int in_base = base.find(id.layer, id.top_mode);
    guess.nodes[k] = in_base >= 0 ? clipped.settings.nodes[in_base]
                                  : NodeSetting{hw.nodes[k].range.max, 0.0};
  }
  return guess;
}

OptimizationResult optimize_settings(const UnitaryMatrix &u, const MeshLayout &layout,
                                     const HardwareSample &hw, const MeshSettings &start,
                                     const OptimizerOptions &options) {
  if (!(start.layout == layout) || !(hw.layout == layout))
    throw Error(ErrorCode::LayoutMismatch,
                "start settings, hardware and layout must describe the same mesh");
  start.validate();
  for (std::size_t k = 0; k < start.nodes.size(); ++k) {
    const double r = start.nodes[k].reflectivity;
    const ReflectivityRange &range = hw.nodes[k].range;
    if (r < range.min - kFeasibilitySlack || r > range.max + kFeasibilitySlack) {
      std::ostringstream msg;
      msg << "start is infeasible: node " << k << " has R=" << r << " outside ["
          << range.min << ", " << range.max << "]";
      throw Error(ErrorCode::Infeasible, msg.str());
    }
  }

  const FidelityObjective objective(u, layout);
  std::vector<double> lower;
  std::vector<double> upper;
  objective.bounds(hw, lower, upper);

  auto snap = [&](MeshSettings s) {
    for (std::size_t k = 0; k < s.nodes.size(); ++k)
      s.nodes[k].reflectivity = hw.nodes[k].range.clamp(s.nodes[k].reflectivity);
    return s;
  };

  const MeshSettings feasible_start = snap(start);
  const double f_start = fidelity(u, mesh_unitary(feasible_start));

  auto run_from = [&](std::vector<double> x0) {
    return minimize_box(
        [&](std::span<const double> x, std::span<double> g) {
          return objective.value_and_gradient(x, g);
        },
        std::move(x0), lower, upper, options.max_iters, options.tol);
  };

  BoxMinimizerResult best = run_from(objective.encode(feasible_start));
  std::vector<double> trace = best.trace;
  int iterations = best.iterations;

  std::mt19937_64 rng(options.restart_seed);
  std::uniform_real_distribution<double> kick(-options.restart_phase_kick,
                                              options.restart_phase_kick);
  for (int r = 0; r < options.restarts && best.value > options.tol; ++r) {
    std::vector<double> x0 = best.x;
    for (std::size_t i = 0; i < x0.size(); ++i)
      if (!std::isfinite(lower[i])) x0[i] += kick(rng);
    BoxMinimizerResult candidate = run_from(std::move(x0));
    iterations += candidate.iterations;
    if (candidate.value < best.value) {
      best = std::move(candidate);
      trace.push_back(best.value);
    }
  }

  OptimizationResult result;
  result.settings = snap(objective.decode(best.x));
  result.fidelity_before = f_start;
  result.fidelity_after = fidelity(u, mesh_unitary(result.settings));
  if (result.fidelity_after < f_start) {
    result.settings = feasible_start;
    result.fidelity_after = f_start;
  }
  result.iterations = iterations;
  result.converged = best.converged;
  result.objective_trace = std::move(trace);
  return result;
}

double enhancement_ratio(double fidelity_before, double fidelity_after) noexcept {
  // Infidelities at or below this are indistinguishable from zero.
  constexpr double kPerfect = 1e-15;
  const double before = 1.0 - fidelity_before;
  const double after = 1.0 - fidelity_after;
  if (fidelity_before == fidelity_after) return 1.0;
  if (after <= kPerfect)
    return before <= kPerfect ? 1.0 : std::numeric_limits<double>::infinity();
  return before / after;
}

}  // namespace photomesh
