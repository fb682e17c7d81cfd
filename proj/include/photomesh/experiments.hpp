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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "photomesh/mesh.hpp"
#include "photomesh/optimize.hpp"

namespace photomesh {

// Monte-Carlo harnesses. Every trial derives its own seed from the master
// seed and a structural key, and partial sums are combined in a fixed order,
// so all results are independent of the number of worker threads.

inline constexpr double kHistogramBinWidth = 0.02;
inline constexpr int kHistogramBins = 50;

enum class Region { FirstColumn = 0, TopRow = 1, Centre = 2 };
inline constexpr std::array<Region, 3> kRegions{Region::FirstColumn, Region::TopRow,
                                                Region::Centre};
std::string_view to_string(Region region) noexcept;

/// Region membership on the (layer, mode) grid of an n-mode square mesh. The
/// first column is layer 0; the top row is top_mode 0 without the corner node,
/// which belongs to the first column. The centre is the closed square of side 0.2 n (at least one grid unit)
/// around the grid midpoint, with a node placed at (layer, top_mode + 0.5).
bool in_region(Region region, int n, const NodeId &node) noexcept;

struct RegionHistogram {
  // Bin i covers [i, i+1) * kHistogramBinWidth; R = 1 lands in the last bin.
  std::vector<std::uint64_t> counts = std::vector<std::uint64_t>(kHistogramBins, 0);
  std::uint64_t visits = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double max_value = 0.0;

  void add(double r);
  void merge(const RegionHistogram &other);
  double mean() const noexcept;
  /// Standard error of the mean, treating node visits as independent.
  double std_error() const noexcept;
};

struct SpatialStats {
  int n_modes = 0;
  int samples = 0;
  MeshLayout layout;
  std::vector<double> mean_reflectivity;  // parallel to layout.nodes()
  std::array<RegionHistogram, 3> histograms;
  double overall_mean = 0.0;

  const RegionHistogram &histogram(Region r) const {
    return histograms[static_cast<int>(r)];
  }
};

/// Decomposes `samples` Haar unitaries on the square mesh and accumulates
/// per-node mean reflectivities and region histograms.
SpatialStats reflectivity_statistics(int n, int samples, std::uint64_t seed, int jobs = 1);

struct SweepRecord {
  int n_modes = 0;
  double sigma = 0.0;
  MeshKind kind = MeshKind::Square;
  int trials = 0;
  double affected_fraction = 0.0;
  // Statistics over affected trials only; zero when none were affected.
  double mean_infidelity_affected = 0.0;
  double std_infidelity_affected = 0.0;
  double mean_rel_deviation = 0.0;
  double max_rel_deviation = 0.0;  // mean over affected trials of the per-trial max
};

/// One record per (size, sigma) cell. Trial t of a cell draws its unitary
/// and hardware from seeds keyed on (seed, n, sigma, t), independent of the
/// mesh kind and of the grid, so square and triangular sweeps see the same
/// unitaries.
std::vector<SweepRecord> fidelity_sweep(const std::vector<int> &sizes,
                                        const std::vector<double> &sigmas, int trials,
                                        MeshKind kind, std::uint64_t seed, int jobs = 1);

enum class BenchmarkVariant { OptimizeSquare, OptimizeExtraLayer };
std::string_view to_string(BenchmarkVariant v) noexcept;

struct BenchmarkRow {
  int n_modes = 0;
  BenchmarkVariant variant = BenchmarkVariant::OptimizeSquare;
  int trials = 0;
  /// enhancement_ratio(mean direct fidelity, mean optimized fidelity).
  double mean_enhancement = 1.0;
  double mean_fidelity_after = 1.0;
  double mean_fidelity_direct = 1.0;
};

struct BenchmarkTrial {
  int n_modes = 0;
  BenchmarkVariant variant = BenchmarkVariant::OptimizeSquare;
  int trial = 0;
  double fidelity_direct = 1.0;
  double fidelity_start = 1.0;
  double fidelity_after = 1.0;
  int iterations = 0;
  bool converged = false;
  bool trace_monotone = true;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  std::vector<BenchmarkTrial> trials;
};

/// For each size and trial pairs a Haar unitary with a hardware sample of the
/// square mesh plus one extra layer. The direct baseline is the clipped
/// rectangular decomposition on the base mesh; variant OptimizeSquare
/// optimizes the base mesh from that start, OptimizeExtraLayer optimizes the
/// extended mesh from `initial_guess_redundant`.
BenchmarkResult optimization_benchmark(const std::vector<int> &sizes, double sigma,
                                       int trials, std::uint64_t seed, int jobs = 1,
                                       const OptimizerOptions &options = {});

struct FourierRow {
  int n_modes = 0;
  int n_low_nodes = 0;
  /// Low nodes inside the centre region that are off both main diagonals.
  int centre_offdiag_low_count = 0;
  double haar_mean_low_nodes = 0.0;
};

/// Nodes of the rectangular decomposition of fourier_matrix(n) with
/// reflectivity below `threshold`.
std::vector<NodeId> fourier_low_nodes(int n, double threshold);

/// True if the node lies within one grid step of the main diagonal
/// (top_mode = layer) or the anti-diagonal (top_mode = n - 2 - layer).
bool on_main_diagonal(int n, const NodeId &node) noexcept;

std::vector<FourierRow> fourier_reflectivity_profile(const std::vector<int> &sizes,
                                                     double threshold, int haar_samples,
                                                     std::uint64_t seed, int jobs = 1);

// CSV rendering, header row included; columns follow the record fields.
std::string spatial_stats_csv(const std::vector<SpatialStats> &stats);
std::string sweep_csv(const std::vector<SweepRecord> &records);
std::string benchmark_csv(const std::vector<BenchmarkRow> &rows);
std::string fourier_csv(const std::vector<FourierRow> &rows);

}  // namespace photomesh
