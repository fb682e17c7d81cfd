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

#include "photomesh/decompose.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "photomesh/error.hpp"

namespace photomesh {

namespace {

// Entries at or below this magnitude count as already nulled.
constexpr double kNullEps = 1e-14;

struct PlacedNode {
  int top_mode;
  NodeSetting setting;
};

void require_decomposable(const UnitaryMatrix &u) {
  if (u.dim() < 2) {
    std::ostringstream msg;
    msg << "decomposition needs at least 2 modes, got " << u.dim();
    throw Error(ErrorCode::InvalidDimension, msg.str());
  }
  const double dev = unitarity_deviation(u.matrix());
  if (!(dev <= UnitaryMatrix::kDefaultTolerance)) {
    std::ostringstream msg;
    msg << "cannot decompose a non-unitary matrix: max |U^dagger U - I| = " << dev;
    throw NotUnitaryError(dev, msg.str());
  }
}

// Node whose inverse, applied to columns (c, c+1) from the right, zeroes
// entry (row, c).
NodeSetting null_by_column(const ComplexMatrix &u, int row, int c) {
  const Complex a = u(row, c);
  const Complex b = u(row, c + 1);
  if (std::abs(a) <= kNullEps) return {1.0, 0.0};
  const double pa = std::norm(a);
  const double pb = std::norm(b);
  return {pb / (pa + pb), std::arg(a) - std::arg(b)};
}

// Node which, applied to rows (r, r+1) from the left, zeroes entry (r+1, col).
NodeSetting null_by_row(const ComplexMatrix &u, int r, int col) {
  const Complex a = u(r, col);
  const Complex b = u(r + 1, col);
  if (std::abs(b) <= kNullEps) return {1.0, 0.0};
  const double pa = std::norm(a);
  const double pb = std::norm(b);
  return {pa / (pa + pb), std::numbers::pi + std::arg(b) - std::arg(a)};
}

// Assigns the k-th node on each mode pair in application order to the k-th
// layout node on that pair. Nodes on the same pair keep their order, which
// is all a layered mesh distinguishes.
MeshSettings place_on_layout(const MeshLayout &layout,
                             const std::vector<PlacedNode> &sequence,
                             const Eigen::VectorXcd &diagonal) {
  const int n = layout.n_modes();
  std::vector<std::deque<std::size_t>> slots(n - 1);
  for (std::size_t i = 0; i < layout.size(); ++i)
    slots[layout.nodes()[i].top_mode].push_back(i);

  MeshSettings settings = identity_settings(layout);
  for (const PlacedNode &node : sequence) {
    auto &queue = slots[node.top_mode];
    if (queue.empty())
      throw Error(ErrorCode::LayoutMismatch,
                  "decomposition produced more nodes than the layout holds");
    settings.nodes[queue.front()] = {node.setting.reflectivity,
                                     wrap_phase(node.setting.phase)};
    queue.pop_front();
  }
  for (int i = 0; i < n; ++i) settings.output_phases[i] = wrap_phase(std::arg(diagonal(i)));
  return settings;
}

}  // namespace

MeshSettings clements_decompose(const UnitaryMatrix &u) {
  require_decomposable(u);
  const int n = u.dim();
  ComplexMatrix work = u.matrix();

  std::vector<PlacedNode> input_side;   // application order
  std::vector<PlacedNode> output_side;  // order applied from the left
  for (int i = 0; i < n - 1; ++i) {
    if (i % 2 == 0) {
      for (int j = 0; j <= i; ++j) {
        const int row = n - 1 - j;
        const int col = i - j;
        const NodeSetting s = null_by_column(work, row, col);
        apply_cols(work, col, node_block(s.reflectivity, s.phase).adjoint());
        input_side.push_back({col, s});
      }
    } else {
      for (int j = 0; j <= i; ++j) {
        const int row = n - 1 - i + j;
        const int col = j;
        const NodeSetting s = null_by_row(work, row - 1, col);
        apply_rows(work, row - 1, node_block(s.reflectivity, s.phase));
        output_side.push_back({row - 1, s});
      }
    }
  }

  // work = L_k ... L_1 U R_1^-1 ... R_m^-1 is diagonal. Move each L^-1 to the
  // right of the diagonal: L^-1(R, phi) D = D' T(R, phi') on the same modes.
  Eigen::VectorXcd d = work.diagonal();
  std::vector<PlacedNode> sequence = input_side;
  for (auto it = output_side.rbegin(); it != output_side.rend(); ++it) {
    const int m = it->top_mode;
    const Complex d1 = d(m);
    const Complex d2 = d(m + 1);
    const double phase = std::arg(-d1 / d2);
    d(m) = -std::polar(1.0, -it->setting.phase) * d2;
    d(m + 1) = d2;
    sequence.push_back({m, {it->setting.reflectivity, phase}});
  }
  return place_on_layout(MeshLayout::square(n), sequence, d);
}

MeshSettings reck_decompose(const UnitaryMatrix &u) {
  require_decomposable(u);
  const int n = u.dim();
  ComplexMatrix work = u.matrix();
  std::vector<PlacedNode> sequence;
  for (int row = n - 1; row >= 1; --row)
    for (int c = 0; c < row; ++c) {
      const NodeSetting s = null_by_column(work, row, c);
      apply_cols(work, c, node_block(s.reflectivity, s.phase).adjoint());
      sequence.push_back({c, s});
    }
  return place_on_layout(MeshLayout::triangular(n), sequence, work.diagonal());
}

MeshSettings decompose(const UnitaryMatrix &u, MeshKind kind) {
  return kind == MeshKind::Square ? clements_decompose(u) : reck_decompose(u);
}

ClipResult clip_to_hardware(const MeshSettings &settings, const HardwareSample &hw) {
  if (!(settings.layout == hw.layout))
    throw Error(ErrorCode::LayoutMismatch,
                "hardware sample was drawn for a different layout");
  ClipResult result{settings, 0};
  for (std::size_t k = 0; k < result.settings.nodes.size(); ++k) {
    double &r = result.settings.nodes[k].reflectivity;
    const double clamped = hw.nodes[k].range.clamp(r);
    if (clamped != r) {
      r = clamped;
      ++result.n_clipped;
    }
  }
  return result;
}

Evaluation decompose_clip_evaluate(const UnitaryMatrix &u, MeshKind kind,
                                   const HardwareSample &hw) {
  const ClipResult clipped = clip_to_hardware(decompose(u, kind), hw);
  const UnitaryMatrix effective = mesh_unitary(clipped.settings);
  Evaluation eval;
  eval.fidelity = fidelity(u, effective);
  eval.n_clipped = clipped.n_clipped;
  eval.affected = clipped.n_clipped > 0;
  eval.deviation = transition_probability_deviation(u, effective);
  return eval;
}

}  // namespace photomesh
