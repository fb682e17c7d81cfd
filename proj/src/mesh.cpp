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

#include "photomesh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "photomesh/error.hpp"
#include "photomesh/seeding.hpp"

namespace photomesh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Slack allowed when checking a requested reflectivity against a range.
constexpr double kRangeSlack = 1e-12;

void require_modes(int n, const char *what) {
  if (n < 2) {
    std::ostringstream msg;
    msg << what << ": mesh needs at least 2 modes, got " << n;
    throw Error(ErrorCode::InvalidDimension, msg.str());
  }
}

void require_splitter(double r, const char *name) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream msg;
    msg << "static splitter reflectivity " << name << " = " << r
        << " must lie strictly inside (0, 1)";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

double draw_splitter(std::mt19937_64 &rng, std::normal_distribution<double> &dist) {
  for (;;) {
    const double r = dist(rng);
    if (r > kSplitterLow && r < kSplitterHigh) return r;
  }
}

}  // namespace

std::string_view to_string(MeshKind kind) noexcept {
  return kind == MeshKind::Square ? "square" : "triangular";
}

MeshKind parse_mesh_kind(std::string_view text) {
  if (text == "square") return MeshKind::Square;
  if (text == "triangular") return MeshKind::Triangular;
  throw Error(ErrorCode::InvalidArgument,
              "unknown mesh kind '" + std::string(text) +
                  "' (expected square or triangular)");
}

MeshLayout::MeshLayout(int n, MeshKind kind, int extra_layers,
                       std::vector<NodeId> nodes)
    : n_modes_(n), kind_(kind), extra_layers_(extra_layers),
      nodes_(std::move(nodes)) {
  for (const NodeId &node : nodes_) n_layers_ = std::max(n_layers_, node.layer + 1);
}

MeshLayout MeshLayout::square(int n, int extra_layers) {
  require_modes(n, "square_layout");
  if (extra_layers < 0)
    throw Error(ErrorCode::InvalidArgument,
                "square_layout: extra_layers must be >= 0");
  std::vector<NodeId> nodes;
  const int depth = n + extra_layers;
  for (int layer = 0; layer < depth; ++layer) {
    int slot = 0;
    for (int m = layer % 2; m <= n - 2; m += 2) nodes.push_back({layer, slot++, m});
  }
  MeshLayout layout(n, MeshKind::Square, extra_layers, std::move(nodes));
  // n = 2 leaves odd layers empty; the depth is still n + extra_layers.
  layout.n_layers_ = depth;
  return layout;
}

MeshLayout MeshLayout::triangular(int n) {
  require_modes(n, "triangular_layout");
  // Row r of the Reck scheme nulls r entries with nodes on modes 0..r-1;
  // node (r, c) lands in layer c + 2 (n - 1 - r).
  std::vector<NodeId> nodes;
  for (int r = n - 1; r >= 1; --r)
    for (int c = 0; c < r; ++c) nodes.push_back({c + 2 * (n - 1 - r), 0, c});
  std::sort(nodes.begin(), nodes.end(), [](const NodeId &a, const NodeId &b) {
    return std::tie(a.layer, a.top_mode) < std::tie(b.layer, b.top_mode);
  });
  for (std::size_t i = 0; i < nodes.size(); ++i)
    nodes[i].slot = (i > 0 && nodes[i - 1].layer == nodes[i].layer)
                        ? nodes[i - 1].slot + 1
                        : 0;
  return MeshLayout(n, MeshKind::Triangular, 0, std::move(nodes));
}

int MeshLayout::find(int layer, int top_mode) const noexcept {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].layer == layer && nodes_[i].top_mode == top_mode)
      return static_cast<int>(i);
  return -1;
}

void MeshSettings::validate() const {
  if (nodes.size() != layout.size()) {
    std::ostringstream msg;
    msg << "settings have " << nodes.size() << " node entries but the layout has "
        << layout.size() << " nodes";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  if (output_phases.size() != static_cast<std::size_t>(layout.n_modes())) {
    std::ostringstream msg;
    msg << "settings have " << output_phases.size() << " output phases for "
        << layout.n_modes() << " modes";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeSetting &s = nodes[i];
    if (!(s.reflectivity >= 0.0 && s.reflectivity <= 1.0) || !std::isfinite(s.phase)) {
      std::ostringstream msg;
      msg << "node " << i << " has invalid setting (R=" << s.reflectivity
          << ", phi=" << s.phase << ")";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  }
  for (double d : output_phases)
    if (!std::isfinite(d))
      throw Error(ErrorCode::InvalidArgument, "output phase is not finite");
}

MeshSettings identity_settings(const MeshLayout &layout) {
  return MeshSettings{layout, std::vector<NodeSetting>(layout.size()),
                      std::vector<double>(layout.n_modes(), 0.0)};
}

double wrap_phase(double phase) noexcept {
  double w = std::fmod(phase, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2 pi.
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double ReflectivityRange::clamp(double r) const noexcept {
  return std::clamp(r, min, max);
}

double mzi_reflectivity(double r1, double r2, double internal_phase) {
  const double t1 = 1.0 - r1;
  const double t2 = 1.0 - r2;
  return r1 * r2 + t1 * t2 - 2.0 * std::sqrt(r1 * r2 * t1 * t2) * std::cos(internal_phase);
}

ReflectivityRange achievable_range(double r1, double r2) {
  require_splitter(r1, "r1");
  require_splitter(r2, "r2");
  const double a = std::sqrt(r1 * r2);
  const double b = std::sqrt((1.0 - r1) * (1.0 - r2));
  ReflectivityRange range;
  range.min = std::clamp((a - b) * (a - b), 0.0, 1.0);
  range.max = std::clamp((a + b) * (a + b), 0.0, 1.0);
  return range;
}

double internal_phase_for_reflectivity(double target, double r1, double r2) {
  require_splitter(r1, "r1");
  require_splitter(r2, "r2");
  const ReflectivityRange range = achievable_range(r1, r2);
  if (!(target >= range.min - kRangeSlack && target <= range.max + kRangeSlack)) {
    std::ostringstream msg;
    msg << "reflectivity " << target << " is outside the achievable range ["
        << range.min << ", " << range.max << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  const double t1 = 1.0 - r1;
  const double t2 = 1.0 - r2;
  const double denom = 2.0 * std::sqrt(r1 * r2 * t1 * t2);
  const double c = std::clamp((r1 * r2 + t1 * t2 - target) / denom, -1.0, 1.0);
  return std::acos(c);
}

HardwareSample sample_hardware(const MeshLayout &layout, double sigma,
                               std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    std::ostringstream msg;
    msg << "fabrication error sigma must be finite and >= 0, got " << sigma;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  HardwareSample hw{layout, sigma, seed, {}};
  hw.nodes.reserve(layout.size());
  for (const NodeId &id : layout.nodes()) {
    NodeHardware node;
    if (sigma > 0.0) {
      std::mt19937_64 rng(derive_seed(
          seed, {static_cast<std::uint64_t>(id.layer), static_cast<std::uint64_t>(id.top_mode)}));
      std::normal_distribution<double> dist(0.5, sigma);
      node.r1 = draw_splitter(rng, dist);
      node.r2 = draw_splitter(rng, dist);
    }
    node.range = achievable_range(node.r1, node.r2);
    hw.nodes.push_back(node);
  }
  return hw;
}

Eigen::Matrix2cd node_block(double reflectivity, double phase) {
  const double c = std::sqrt(std::max(0.0, reflectivity));
  const double s = std::sqrt(std::max(0.0, 1.0 - reflectivity));
  const Complex e = std::polar(1.0, phase);
  Eigen::Matrix2cd t;
  t << e * c, -s, e * s, c;
  return t;
}

void apply_rows(ComplexMatrix &target, int top_mode, const Eigen::Matrix2cd &block) {
  for (Eigen::Index j = 0; j < target.cols(); ++j) {
    const Complex a = target(top_mode, j);
    const Complex b = target(top_mode + 1, j);
    target(top_mode, j) = block(0, 0) * a + block(0, 1) * b;
    target(top_mode + 1, j) = block(1, 0) * a + block(1, 1) * b;
  }
}

void apply_cols(ComplexMatrix &target, int top_mode, const Eigen::Matrix2cd &block) {
  for (Eigen::Index i = 0; i < target.rows(); ++i) {
    const Complex a = target(i, top_mode);
    const Complex b = target(i, top_mode + 1);
    target(i, top_mode) = a * block(0, 0) + b * block(1, 0);
    target(i, top_mode + 1) = a * block(0, 1) + b * block(1, 1);
  }
}

UnitaryMatrix mesh_unitary(const MeshSettings &settings) {
  settings.validate();
  const int n = settings.layout.n_modes();
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  const auto &ids = settings.layout.nodes();
  for (std::size_t k = 0; k < ids.size(); ++k)
    apply_rows(m, ids[k].top_mode,
               node_block(settings.nodes[k].reflectivity, settings.nodes[k].phase));
  for (int i = 0; i < n; ++i) m.row(i) *= std::polar(1.0, settings.output_phases[i]);
  return UnitaryMatrix::trusted(std::move(m));
}

}  // namespace photomesh
