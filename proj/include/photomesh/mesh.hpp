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
#include <string_view>
#include <vector>

#include "photomesh/unitary.hpp"

namespace photomesh {

enum class MeshKind { Square, Triangular };

std::string_view to_string(MeshKind kind) noexcept;
/// Parses "square" / "triangular"; throws InvalidArgument otherwise.
MeshKind parse_mesh_kind(std::string_view text);

/// Position of a two-mode node. The node couples modes top_mode and
/// top_mode + 1; light traverses layers in increasing order.
struct NodeId {
  int layer = 0;
  int slot = 0;
  int top_mode = 0;

  bool operator==(const NodeId &) const = default;
};

/// Geometric arrangement of nodes. Nodes are stored in application order
/// (by layer, then slot): earlier nodes act on the light first.
class MeshLayout {
 public:
  /// Empty layout with no modes; only useful as a placeholder.
  MeshLayout() = default;

  /// Rectangular (quincunx) mesh of depth n, plus `extra_layers` further
  /// layers appended on the output side that continue the alternation.
  static MeshLayout square(int n, int extra_layers = 0);
  /// Reck triangle: n(n-1)/2 nodes in 2n-3 layers.
  static MeshLayout triangular(int n);

  int n_modes() const noexcept { return n_modes_; }
  MeshKind kind() const noexcept { return kind_; }
  int extra_layers() const noexcept { return extra_layers_; }
  int n_layers() const noexcept { return n_layers_; }
  const std::vector<NodeId> &nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Index of the node at (layer, top_mode), or -1 if there is none.
  int find(int layer, int top_mode) const noexcept;

  bool operator==(const MeshLayout &) const = default;

 private:
  MeshLayout(int n, MeshKind kind, int extra_layers, std::vector<NodeId> nodes);

  int n_modes_ = 0;
  MeshKind kind_ = MeshKind::Square;
  int extra_layers_ = 0;
  int n_layers_ = 0;
  std::vector<NodeId> nodes_;
};

/// Reflectivity is the fraction of power that stays in the same mode (R = 1
/// is the bar state). The phase shifter sits on the top input mode.
struct NodeSetting {
  double reflectivity = 1.0;
  double phase = 0.0;

  bool operator==(const NodeSetting &) const = default;
};

struct MeshSettings {
  MeshLayout layout;
  std::vector<NodeSetting> nodes;     // parallel to layout.nodes()
  std::vector<double> output_phases;  // one per mode

  /// Throws InvalidArgument if counts disagree with the layout or any value
  /// is outside its domain.
  void validate() const;

  bool operator==(const MeshSettings &) const = default;
};

/// Settings on `layout` with every node in the bar state and zero phases.
MeshSettings identity_settings(const MeshLayout &layout);

/// Wraps an angle into [0, 2 pi).
double wrap_phase(double phase) noexcept;

struct ReflectivityRange {
  double min = 0.0;
  double max = 1.0;

  bool contains(double r) const noexcept { return r >= min && r <= max; }
  double clamp(double r) const noexcept;
  bool operator==(const ReflectivityRange &) const = default;
};

/// Power staying in the input mode of an MZI whose static splitters have
/// reflectivities r1, r2, at internal phase phi:
/// r1 r2 + t1 t2 - 2 sqrt(r1 r2 t1 t2) cos(phi).
double mzi_reflectivity(double r1, double r2, double internal_phase);

/// Extremes of `mzi_reflectivity` over the internal phase. Requires
/// 0 < r1, r2 < 1.
ReflectivityRange achievable_range(double r1, double r2);

/// Inverse of the MZI power curve on [0, pi]. Throws OutOfRange if the
/// target is not reachable, InvalidArgument if a splitter is degenerate.
double internal_phase_for_reflectivity(double target, double r1, double r2);

struct NodeHardware {
  double r1 = 0.5;
  double r2 = 0.5;
  ReflectivityRange range;

  bool operator==(const NodeHardware &) const = default;
};

/// Fabrication-imperfect realization of a layout: static splitter
/// reflectivities per node and the derived achievable range.
struct HardwareSample {
  MeshLayout layout;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<NodeHardware> nodes;  // parallel to layout.nodes()

  bool operator==(const HardwareSample &) const = default;
};

/// Static-splitter bounds; draws outside are rejected and redrawn.
inline constexpr double kSplitterLow = 0.005;
inline constexpr double kSplitterHigh = 0.995;

/// Draws each static splitter from Normal(0.5, sigma^2), redrawing outside
/// (kSplitterLow, kSplitterHigh). Each node draws from its own stream keyed
/// on (seed, layer, top_mode), so a node's hardware does not depend on the
/// rest of the layout or on iteration order.
HardwareSample sample_hardware(const MeshLayout &layout, double sigma,
                               std::uint64_t seed);

/// 2x2 transfer block [[e^{i phi} sqrt(R), -sqrt(1-R)],
///                     [e^{i phi} sqrt(1-R), sqrt(R)]].
Eigen::Matrix2cd node_block(double reflectivity, double phase);

/// Left-multiplies rows (m, m+1) of `target` by `block`.
void apply_rows(ComplexMatrix &target, int top_mode, const Eigen::Matrix2cd &block);
/// Right-multiplies columns (m, m+1) of `target` by `block`.
void apply_cols(ComplexMatrix &target, int top_mode, const Eigen::Matrix2cd &block);

/// D * T_K * ... * T_1 with T_1 the first node in application order.
UnitaryMatrix mesh_unitary(const MeshSettings &settings);

}  // namespace photomesh
