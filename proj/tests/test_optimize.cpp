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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "photomesh/box_minimizer.hpp"
#include "photomesh/decompose.hpp"
#include "photomesh/error.hpp"
#include "photomesh/optimize.hpp"

namespace photomesh {
namespace {

constexpr double kPi = std::numbers::pi;

bool feasible(const MeshSettings &s, const HardwareSample &hw) {
  for (std::size_t k = 0; k < s.nodes.size(); ++k)
    if (!hw.nodes[k].range.contains(s.nodes[k].reflectivity)) return false;
  return true;
}

TEST(BoxMinimizer, BoundedQuadratic) {
  // min (x-2)^2 + (y+1)^2 on [0,1] x [-3,3] -> (1, -1).
  auto fn = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2 * (x[0] - 2);
    g[1] = 2 * (x[1] + 1);
    return (x[0] - 2) * (x[0] - 2) + (x[1] + 1) * (x[1] + 1);
  };
  const BoxMinimizerResult r = minimize_box(fn, {0.5, 2.0}, {0.0, -3.0}, {1.0, 3.0}, 200, 1e-14);
  EXPECT_NEAR(r.x[0], 1.0, 1e-12);
  EXPECT_NEAR(r.x[1], -1.0, 1e-6);
  EXPECT_TRUE(r.converged);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
}

TEST(Objective, GradientMatchesCentralDifferences) {
  const UnitaryMatrix u = haar_random_unitary(4, 21);
  const FidelityObjective obj(u, MeshLayout::square(4, 1));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> theta(0.05, kPi / 2 - 0.05), phase(0.0, 2 * kPi);
  constexpr double h = 1e-6;
  for (int p = 0; p < 20; ++p) {
    std::vector<double> x(obj.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = (i < 2 * obj.layout().size() && i % 2 == 0) ? theta(rng) : phase(rng);
    std::vector<double> g(obj.size());
    obj.value_and_gradient(x, g);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (obj.value(xp) - obj.value(xm)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[i]));
      scale = std::max(scale, std::abs(fd));
    }
    EXPECT_LT(worst, 1e-4 * scale) << "point " << p;
  }
}

TEST(Objective, EncodeDecodeRoundtrip) {
  const MeshSettings s = clements_decompose(haar_random_unitary(5, 2));
  const FidelityObjective obj(haar_random_unitary(5, 2), s.layout);
  const std::vector<double> x = obj.encode(s);
  EXPECT_NEAR(obj.value(x), 0.0, 1e-13);
  const MeshSettings back = obj.decode(x);
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    EXPECT_NEAR(back.nodes[k].reflectivity, s.nodes[k].reflectivity, 1e-12);
    EXPECT_NEAR(std::abs(std::polar(1.0, back.nodes[k].phase) - std::polar(1.0, s.nodes[k].phase)),
                0.0, 1e-12);
  }
}

TEST(InitialGuess, NoExtraLayersIsClippedDecomposition) {
  const UnitaryMatrix u = haar_random_unitary(5, 4);
  const HardwareSample hw = sample_hardware(MeshLayout::square(5), 0.05, 4);
  EXPECT_EQ(initial_guess_redundant(u, MeshLayout::square(5), hw),
            clip_to_hardware(clements_decompose(u), hw).settings);
}

TEST(InitialGuess, ExtraNodesAtBarWhenPerfect) {
  const UnitaryMatrix u = haar_random_unitary(5, 4);
  const MeshLayout l = MeshLayout::square(5, 1);
  const MeshSettings s = initial_guess_redundant(u, l, sample_hardware(l, 0.0, 0));
  for (std::size_t k = 0; k < l.size(); ++k)
    if (l.nodes()[k].layer >= 5) {
      EXPECT_EQ(s.nodes[k].reflectivity, 1.0);
      EXPECT_EQ(s.nodes[k].phase, 0.0);
    }
  EXPECT_LT(max_entry_deviation(mesh_unitary(s).matrix(), u.matrix()), 1e-10);
}

TEST(InitialGuess, ExtraLayerOnlyDegrades) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const UnitaryMatrix u = haar_random_unitary(6, seed);
    const MeshLayout l = MeshLayout::square(6, 1);
    const HardwareSample hw = sample_hardware(l, 0.05, seed);
    const MeshSettings base =
        clip_to_hardware(clements_decompose(u), restrict_hardware(hw, MeshLayout::square(6)))
            .settings;
    const double f_guess = fidelity(u, mesh_unitary(initial_guess_redundant(u, l, hw)));
    EXPECT_LE(f_guess, fidelity(u, mesh_unitary(base)) + 1e-9);
  }
}

TEST(InitialGuess, TriangularRejected) {
  const UnitaryMatrix u = haar_random_unitary(3, 4);
  const MeshLayout l = MeshLayout::triangular(3);
  EXPECT_THROW(initial_guess_redundant(u, l, sample_hardware(l, 0.0, 0)), Error);
}

TEST(Optimize, ExactStartStaysExact) {
  const UnitaryMatrix u = haar_random_unitary(4, 5);
  const MeshSettings start = clements_decompose(u);
  const OptimizationResult r =
      optimize_settings(u, start.layout, sample_hardware(start.layout, 0.0, 0), start);
  EXPECT_NEAR(r.fidelity_after, 1.0, 1e-14);
  EXPECT_GE(r.fidelity_after, r.fidelity_before - 1e-12);
}

TEST(Optimize, InfeasibleStartRejected) {
  const UnitaryMatrix u = haar_random_unitary(2, 5);
  MeshSettings start = clements_decompose(u);
  HardwareSample hw = sample_hardware(start.layout, 0.0, 0);
  hw.nodes[0] = {0.6, 0.6, achievable_range(0.6, 0.6)};
  start.nodes[0].reflectivity = 0.01;
  try {
    optimize_settings(u, start.layout, hw, start);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::Infeasible);
  }
}

TEST(Optimize, MillerLimitTwoModes) {
  const MeshLayout l = MeshLayout::square(2, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const UnitaryMatrix u = haar_random_unitary(2, seed);
    const HardwareSample hw = sample_hardware(l, 0.1, seed);
    const OptimizationResult r = optimize_settings(u, l, hw, initial_guess_redundant(u, l, hw));
    EXPECT_GT(r.fidelity_after, 1 - 1e-6) << seed;
    EXPECT_TRUE(feasible(r.settings, hw));
  }
}

TEST(Optimize, ImprovesEveryAffectedTrial) {
  const MeshLayout l = MeshLayout::square(4);
  int affected = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const UnitaryMatrix u = haar_random_unitary(4, seed);
    const HardwareSample hw = sample_hardware(l, 0.05, seed);
    const ClipResult start = clip_to_hardware(clements_decompose(u), hw);
    const OptimizationResult r = optimize_settings(u, l, hw, start.settings);
    EXPECT_TRUE(feasible(r.settings, hw));
    EXPECT_GE(r.fidelity_after, r.fidelity_before - 1e-12);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
      EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1]);
    if (start.n_clipped > 0 && r.fidelity_before < 1 - 1e-12) {
      ++affected;
      EXPECT_GT(r.fidelity_after, r.fidelity_before) << seed;
    }
  }
  EXPECT_GT(affected, 0);
}

// Dense search over (R, phi, delta1 - delta0) for a single constrained node;
// the global output phase does not affect the fidelity.
TEST(Optimize, SingleNodeMatchesGridSearch) {
  const MeshLayout l = MeshLayout::square(2);
  HardwareSample hw = sample_hardware(l, 0.0, 0);
  hw.nodes[0] = {0.9, 0.85, achievable_range(0.9, 0.85)};
  std::uint64_t seed = 0;
  while (clip_to_hardware(clements_decompose(haar_random_unitary(2, seed)), hw).n_clipped == 0)
    ++seed;
  const UnitaryMatrix u = haar_random_unitary(2, seed);
  const ClipResult start = clip_to_hardware(clements_decompose(u), hw);
  const OptimizationResult r = optimize_settings(u, l, hw, start.settings);

  double best = 0.0;
  const int nr = 200, np = 90;
  for (int i = 0; i <= nr; ++i) {
    const double R = hw.nodes[0].range.min + (hw.nodes[0].range.max - hw.nodes[0].range.min) * i / nr;
    for (int a = 0; a < np; ++a)
      for (int b = 0; b < np; ++b) {
        MeshSettings s = identity_settings(l);
        s.nodes[0] = {R, 2 * kPi * a / np};
        s.output_phases = {0.0, 2 * kPi * b / np};
        best = std::max(best, fidelity(u, mesh_unitary(s)));
      }
  }
  EXPECT_GE(r.fidelity_after, best - 1e-9);
  EXPECT_LT(r.fidelity_after - best, 5e-3);
}

TEST(Enhancement, Examples) {
  EXPECT_NEAR(enhancement_ratio(0.99, 0.999), 10.0, 1e-9);
  EXPECT_EQ(enhancement_ratio(0.97, 0.97), 1.0);
  EXPECT_EQ(enhancement_ratio(0.9, 1.0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(enhancement_ratio(1.0, 1.0), 1.0);
}

}  // namespace
}  // namespace photomesh
