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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "photomesh/error.hpp"
#include "photomesh/experiments.hpp"
#include "photomesh/runner.hpp"

namespace photomesh {
namespace {

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string &text) { return text.substr(0, text.find('\n')); }

TEST(Regions, CentreIsClosedSquare) {
  // n = 20: midpoint 9.5, half-width 2.
  const auto centre = [](int layer, int top) {
    return in_region(Region::Centre, 20, NodeId{layer, 0, top});
  };
  EXPECT_TRUE(centre(10, 9));
  EXPECT_TRUE(centre(8, 7));    // |8 - 9.5| = 1.5, |7.5 - 9.5| = 2
  EXPECT_FALSE(centre(7, 9));   // |7 - 9.5| = 2.5
  EXPECT_FALSE(centre(10, 12)); // |12.5 - 9.5| = 3
  EXPECT_TRUE(in_region(Region::FirstColumn, 20, NodeId{0, 3, 6}));
  EXPECT_TRUE(in_region(Region::TopRow, 20, NodeId{4, 0, 0}));
  EXPECT_FALSE(in_region(Region::TopRow, 20, NodeId{5, 0, 1}));
  EXPECT_TRUE(in_region(Region::FirstColumn, 20, NodeId{0, 0, 0}));
  EXPECT_FALSE(in_region(Region::TopRow, 20, NodeId{0, 0, 0}));
}

TEST(Regions, CentreNonEmptyFromFourModes) {
  for (int n : {4, 5, 10, 20, 50}) {
    const MeshLayout l = MeshLayout::square(n);
    int count = 0;
    for (const NodeId &id : l.nodes()) count += in_region(Region::Centre, n, id);
    EXPECT_GT(count, 0) << n;
  }
}

TEST(Histogram, BinsAndMerge) {
  RegionHistogram a, b;
  a.add(0.0);
  a.add(0.019);
  a.add(0.02);
  b.add(1.0);
  a.merge(b);
  EXPECT_EQ(a.counts[0], 2u);
  EXPECT_EQ(a.counts[1], 1u);
  EXPECT_EQ(a.counts[kHistogramBins - 1], 1u);
  EXPECT_EQ(a.visits, 4u);
  EXPECT_DOUBLE_EQ(a.mean(), (0.019 + 0.02 + 1.0) / 4);
  EXPECT_EQ(a.max_value, 1.0);
}

TEST(SpatialStats, MassAndJobInvariance) {
  const SpatialStats s1 = reflectivity_statistics(6, 120, 5, 1);
  const SpatialStats s3 = reflectivity_statistics(6, 120, 5, 3);
  EXPECT_EQ(spatial_stats_csv({s1}), spatial_stats_csv({s3}));
  for (Region r : kRegions) {
    std::uint64_t region_nodes = 0;
    for (const NodeId &id : s1.layout.nodes()) region_nodes += in_region(r, 6, id);
    std::uint64_t total = 0;
    for (auto c : s1.histogram(r).counts) total += c;
    EXPECT_EQ(total, region_nodes * 120);
    EXPECT_EQ(s1.histogram(r).visits, total);
  }
  for (double m : s1.mean_reflectivity) {
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
  }
}

TEST(SpatialStats, RejectsSmallMesh) {
  EXPECT_THROW(reflectivity_statistics(3, 10, 1), Error);
  EXPECT_THROW(reflectivity_statistics(5, 0, 1), Error);
}

TEST(Sweep, SigmaZeroIsUnaffected) {
  for (MeshKind kind : {MeshKind::Square, MeshKind::Triangular})
    for (const SweepRecord &r : fidelity_sweep({3, 6}, {0.0}, 20, kind, 1)) {
      EXPECT_EQ(r.affected_fraction, 0.0);
      EXPECT_EQ(r.mean_infidelity_affected, 0.0);
    }
}

TEST(Sweep, JobInvariantAndOrdered) {
  const auto a = fidelity_sweep({4, 8}, {0.02, 0.1}, 30, MeshKind::Square, 9, 1);
  const auto b = fidelity_sweep({4, 8}, {0.02, 0.1}, 30, MeshKind::Square, 9, 4);
  EXPECT_EQ(sweep_csv(a), sweep_csv(b));
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[1].n_modes, 4);
  EXPECT_EQ(a[1].sigma, 0.1);
  EXPECT_LE(a[0].affected_fraction, a[1].affected_fraction);
  EXPECT_EQ(first_line(sweep_csv(a)),
            "n_modes,sigma,kind,trials,affected_fraction,mean_infidelity_affected,"
            "std_infidelity_affected,mean_rel_deviation,max_rel_deviation");
}

TEST(Benchmark, SmallRunIsConsistent) {
  OptimizerOptions o;
  o.max_iters = 300;
  const BenchmarkResult a = optimization_benchmark({2, 3}, 0.05, 4, 3, 1, o);
  const BenchmarkResult b = optimization_benchmark({2, 3}, 0.05, 4, 3, 2, o);
  EXPECT_EQ(benchmark_csv(a.rows), benchmark_csv(b.rows));
  ASSERT_EQ(a.rows.size(), 4u);
  EXPECT_EQ(a.trials.size(), 16u);
  for (const BenchmarkTrial &t : a.trials) EXPECT_TRUE(t.trace_monotone);
  for (const BenchmarkRow &r : a.rows) EXPECT_GE(r.mean_enhancement, 1.0);
}

TEST(Fourier, MainDiagonal) {
  EXPECT_TRUE(on_main_diagonal(8, NodeId{3, 0, 3}));
  EXPECT_TRUE(on_main_diagonal(8, NodeId{2, 0, 4}));  // anti-diagonal: 8 - 2 - 2 = 4
  EXPECT_FALSE(on_main_diagonal(8, NodeId{0, 0, 4}));
}

TEST(Fourier, LowNodesLieOnDiagonals) {
  for (int n : {8, 16})
    for (const NodeId &id : fourier_low_nodes(n, 0.1)) EXPECT_TRUE(on_main_diagonal(n, id));
  // At N = 32 a few low nodes sit two steps off the diagonals, outside the centre.
  const auto rows = fourier_reflectivity_profile({8, 16, 32}, 0.1, 10, 1);
  for (const FourierRow &r : rows) EXPECT_EQ(r.centre_offdiag_low_count, 0);
}

TEST(Runner, DefaultsAndValidation) {
  EXPECT_EQ(resolve_experiment_config("fig3", nlohmann::json::object())["trials"], 500);
  const auto message = [](const nlohmann::json &over) {
    try {
      resolve_experiment_config("fig3", over);
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message({{"trials", 0}}).rfind("config.trials:", 0), 0u);
  EXPECT_EQ(message({{"sigmas", {0.1, -1}}}).rfind("config.sigmas[1]:", 0), 0u);
  EXPECT_EQ(message({{"kinds", {"hexagonal"}}}).rfind("config.kinds[0]:", 0), 0u);
  EXPECT_EQ(message({{"bogus", 1}}).rfind("config.bogus:", 0), 0u);
  EXPECT_THROW(default_experiment_config("fig9"), Error);
}

TEST(Runner, WritesCsvAndSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "photomesh_runner_test";
  std::filesystem::remove_all(dir);
  const auto out = run_experiment("fig3", {{"sizes", {3}}, {"sigmas", {0.0}}, {"trials", 5}}, dir);
  EXPECT_EQ(out.files.size(), 2u);
  const auto sidecar = nlohmann::json::parse(slurp(dir / "fig3.json"));
  EXPECT_EQ(sidecar["build"], build_identifier());
  EXPECT_EQ(sidecar["config"]["trials"], 5);
  EXPECT_EQ(sidecar["seed"], 1);
  const std::string csv = slurp(dir / "fig3.csv");
  EXPECT_NE(csv.find("3,0,square,5,0,"), std::string::npos);
  EXPECT_NE(csv.find("3,0,triangular,5,0,"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace photomesh
