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

#include "photomesh/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "photomesh/error.hpp"

namespace photomesh {

namespace {

// Probability differences at or below this are treated as equal.
constexpr double kProbabilityEps = 1e-14;

void require_same_dim(const UnitaryMatrix &a, const UnitaryMatrix &b,
                      const char *what) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim()
        << ")";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

void require_positive_dim(int n, const char *what) {
  if (n < 1) {
    std::ostringstream msg;
    msg << what << ": mode count must be >= 1, got " << n;
    throw Error(ErrorCode::InvalidDimension, msg.str());
  }
}

}  // namespace

double unitarity_deviation(const ComplexMatrix &m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    return std::numeric_limits<double>::infinity();
  const ComplexMatrix gram = m.adjoint() * m;
  const auto n = m.rows();
  return (gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

double max_entry_deviation(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch,
                "max_entry_deviation: shape mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

UnitaryMatrix UnitaryMatrix::from_matrix(ComplexMatrix m, double tolerance) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << "matrix must be square and non-empty, got " << m.rows() << "x"
        << m.cols();
    throw Error(ErrorCode::InvalidDimension, msg.str());
  }
  const double dev = unitarity_deviation(m);
  if (!(dev <= tolerance)) {
    std::ostringstream msg;
    msg << "matrix is not unitary: max |U^dagger U - I| = " << dev
        << " exceeds tolerance " << tolerance;
    throw NotUnitaryError(dev, msg.str());
  }
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix UnitaryMatrix::trusted(ComplexMatrix m) {
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix haar_random_unitary(int n, std::uint64_t seed) {
  require_positive_dim(n, "haar_random_unitary");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }

  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix &packed = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    const Complex r = packed(k, k);
    const double mag = std::abs(r);
    // A zero pivot has probability zero; leave the column as is.
    if (mag > 0.0) q.col(k) *= r / mag;
  }
  return UnitaryMatrix::trusted(std::move(q));
}

UnitaryMatrix fourier_matrix(int n) {
  require_positive_dim(n, "fourier_matrix");
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      // Reduce jk mod n first so large products keep full angle precision.
      const long long e = (static_cast<long long>(j) * k) % n;
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) / n;
      f(j, k) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  return UnitaryMatrix::trusted(std::move(f));
}

double fidelity(const UnitaryMatrix &u, const UnitaryMatrix &v) {
  require_same_dim(u, v, "fidelity");
  // Tr(U^dagger V) = sum_ij conj(U_ij) V_ij, summed in a fixed order so the
  // result is symmetric under swapping arguments.
  const ComplexMatrix &a = u.matrix();
  const ComplexMatrix &b = v.matrix();
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex x = a(i, j);
      const Complex y = b(i, j);
      re += x.real() * y.real() + x.imag() * y.imag();
      im += x.real() * y.imag() - x.imag() * y.real();
    }
  const double n = static_cast<double>(u.dim());
  const double f = (re * re + im * im) / (n * n);
  return std::clamp(f, 0.0, 1.0);
}

DeviationReport transition_probability_deviation(const UnitaryMatrix &target,
                                                 const UnitaryMatrix &effective) {
  require_same_dim(target, effective, "transition_probability_deviation");
  const int n = target.dim();
  const double mean_p = 1.0 / n;
  double sum = 0.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = std::abs(std::norm(effective(i, j)) - std::norm(target(i, j)));
      if (d <= kProbabilityEps) d = 0.0;
      sum += d;
      worst = std::max(worst, d);
    }
  DeviationReport report;
  report.mean_rel = sum / (static_cast<double>(n) * n) / mean_p;
  report.max_rel = worst / mean_p;
  return report;
}

}  // namespace photomesh
