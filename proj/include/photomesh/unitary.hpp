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

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace photomesh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Max-entry deviation of U^dagger U from the identity. Non-square input
/// yields +infinity.
double unitarity_deviation(const ComplexMatrix &m);

/// Max-entry |a - b|. Throws on shape mismatch.
double max_entry_deviation(const ComplexMatrix &a, const ComplexMatrix &b);

/// A square complex matrix known to be unitary. Construction through
/// `from_matrix` validates; `trusted` skips the check for matrices that are
/// unitary by construction (products of unitaries, QR factors, ...).
class UnitaryMatrix {
 public:
  static constexpr double kDefaultTolerance = 1e-8;

  static UnitaryMatrix from_matrix(ComplexMatrix m,
                                   double tolerance = kDefaultTolerance);
  static UnitaryMatrix trusted(ComplexMatrix m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix &matrix() const noexcept { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  bool operator==(const UnitaryMatrix &other) const { return m_ == other.m_; }

 private:
  explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct DeviationReport {
  double mean_rel = 0.0;
  double max_rel = 0.0;
};

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phases folded back into Q. Deterministic per (n, seed).
UnitaryMatrix haar_random_unitary(int n, std::uint64_t seed);

/// F_{j,k} = exp(2 pi i j k / n) / sqrt(n), zero-based.
UnitaryMatrix fourier_matrix(int n);

/// |Tr(U^dagger V)|^2 / N^2, clamped to [0, 1].
double fidelity(const UnitaryMatrix &u, const UnitaryMatrix &v);

/// Single-photon transition probability error |P_exp - P| relative to the
/// mean probability 1/N, averaged and maximized over all N^2 entries.
DeviationReport transition_probability_deviation(const UnitaryMatrix &target,
                                                 const UnitaryMatrix &effective);

}  // namespace photomesh
