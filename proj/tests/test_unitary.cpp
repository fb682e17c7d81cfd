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
#include <numbers>

#include <gtest/gtest.h>

#include "photomesh/error.hpp"
#include "photomesh/unitary.hpp"

namespace photomesh {
namespace {

ComplexMatrix swap2() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

TEST(Haar, OneModeHasUnitModulus) {
  const UnitaryMatrix u = haar_random_unitary(1, 42);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
}

TEST(Haar, ZeroModesIsRejected) {
  try {
    haar_random_unitary(0, 1);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDimension);
  }
}

TEST(Haar, SameSeedIsBitwiseIdentical) {
  EXPECT_EQ(haar_random_unitary(7, 99), haar_random_unitary(7, 99));
  EXPECT_FALSE(haar_random_unitary(7, 99) == haar_random_unitary(7, 100));
}

TEST(Haar, UnitaryUpTo100Modes) {
  for (int n : {2, 10, 37, 64, 100})
    EXPECT_LT(unitarity_deviation(haar_random_unitary(n, n).matrix()), 1e-10) << n;
}

TEST(Haar, MeanSquaredModulusIsOneOverN) {
  constexpr int n = 20;
  constexpr int samples = 1000;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double p = std::norm(haar_random_unitary(n, s)(0, 0));
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / (samples - 1));
  EXPECT_LT(std::abs(mean - 1.0 / n), 3 * se);
}

TEST(Fourier, TwoModes) {
  const UnitaryMatrix f = fourier_matrix(2);
  const double h = std::sqrt(0.5);
  EXPECT_NEAR(std::abs(f(0, 0) - Complex(h, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f(0, 1) - Complex(h, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f(1, 0) - Complex(h, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f(1, 1) - Complex(-h, 0)), 0.0, 1e-15);
}

TEST(Fourier, UnitaryAndFlat) {
  EXPECT_LT(unitarity_deviation(fourier_matrix(4).matrix()), 1e-12);
  const UnitaryMatrix f = fourier_matrix(8);
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(std::norm(f(i, k)), 0.125, 1e-15);
}

TEST(Fidelity, SelfAndGlobalPhase) {
  const UnitaryMatrix u = haar_random_unitary(6, 3);
  EXPECT_NEAR(fidelity(u, u), 1.0, 1e-14);
  const UnitaryMatrix v =
      UnitaryMatrix::trusted(u.matrix() * std::polar(1.0, 0.83));
  EXPECT_NEAR(fidelity(u, v), 1.0, 1e-14);
}

TEST(Fidelity, IdentityVersusSwapIsZero) {
  const UnitaryMatrix id = UnitaryMatrix::trusted(ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(fidelity(id, UnitaryMatrix::trusted(swap2())), 0.0);
}

TEST(Fidelity, FrozenThreeModeValue) {
  // |Tr(F3^dagger diag(1, i, -1))|^2 / 9, evaluated independently.
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 1;
  d(1, 1) = Complex(0, 1);
  d(2, 2) = -1;
  EXPECT_NEAR(fidelity(fourier_matrix(3), UnitaryMatrix::trusted(d)), 0.21229817805810652,
              1e-14);
}

TEST(Fidelity, ExactlySymmetric) {
  for (int s = 0; s < 20; ++s) {
    const UnitaryMatrix a = haar_random_unitary(5, s);
    const UnitaryMatrix b = haar_random_unitary(5, s + 100);
    EXPECT_EQ(fidelity(a, b), fidelity(b, a));
  }
}

TEST(Fidelity, DimensionMismatch) {
  try {
    fidelity(haar_random_unitary(2, 1), haar_random_unitary(3, 1));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Deviation, IdenticalIsZero) {
  const UnitaryMatrix u = haar_random_unitary(5, 8);
  const DeviationReport r = transition_probability_deviation(u, u);
  EXPECT_EQ(r.mean_rel, 0.0);
  EXPECT_EQ(r.max_rel, 0.0);
}

TEST(Deviation, IdentityVersusSwap) {
  const DeviationReport r = transition_probability_deviation(
      UnitaryMatrix::trusted(ComplexMatrix::Identity(2, 2)), UnitaryMatrix::trusted(swap2()));
  EXPECT_DOUBLE_EQ(r.mean_rel, 2.0);
  EXPECT_DOUBLE_EQ(r.max_rel, 2.0);
}

TEST(Deviation, FrozenThreeModeValue) {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 1;
  d(1, 1) = Complex(0, 1);
  d(2, 2) = -1;
  const DeviationReport r =
      transition_probability_deviation(fourier_matrix(3), UnitaryMatrix::trusted(d));
  EXPECT_NEAR(r.mean_rel, 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(r.max_rel, 2.0, 1e-14);
  EXPECT_LE(r.mean_rel, r.max_rel);
}

TEST(FromMatrix, RejectsNonUnitaryWithDeviation) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 0) = 1.1;
  try {
    UnitaryMatrix::from_matrix(m);
    FAIL();
  } catch (const NotUnitaryError &e) {
    EXPECT_NEAR(e.deviation(), 0.21, 1e-12);
  }
}

}  // namespace
}  // namespace photomesh
