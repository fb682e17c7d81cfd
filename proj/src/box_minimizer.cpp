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

#include "photomesh/box_minimizer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "photomesh/error.hpp"

namespace photomesh {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

}  // namespace

BoxMinimizerResult minimize_box(const ObjectiveWithGradient &fn, std::vector<double> x0,
                                const std::vector<double> &lower,
                                const std::vector<double> &upper, int max_iters,
                                double tol) {
  const std::size_t n = x0.size();
  if (lower.size() != n || upper.size() != n)
    throw Error(ErrorCode::InvalidArgument, "minimize_box: bound size mismatch");
  if (max_iters < 0)
    throw Error(ErrorCode::InvalidArgument, "minimize_box: max_iters must be >= 0");

  using Vec = Eigen::VectorXd;
  const Eigen::Map<const Vec> lo(lower.data(), n);
  const Eigen::Map<const Vec> hi(upper.data(), n);
  auto project = [&](const Vec &v) -> Vec { return v.cwiseMax(lo).cwiseMin(hi); };
  auto eval = [&](const Vec &v, Vec &grad) {
    grad.resize(n);
    return fn(std::span<const double>(v.data(), n), std::span<double>(grad.data(), n));
  };

  Vec x = project(Eigen::Map<const Vec>(x0.data(), n));
  Vec g;
  double f = eval(x, g);

  BoxMinimizerResult result;
  result.trace.push_back(f);

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;  // h is (a multiple of) the identity

  while (result.iterations < max_iters) {
    const double pg_norm = n == 0 ? 0.0 : (project(x - g) - x).cwiseAbs().maxCoeff();
    if (!(pg_norm >= tol)) {
      result.converged = true;
      break;
    }

    // Coordinates sitting on a bound with the gradient pointing outward.
    std::vector<bool> frozen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const double eps = 1e-12 * (1.0 + std::abs(x[i]));
      frozen[i] = (x[i] - lo[i] <= eps && g[i] > 0.0) || (hi[i] - x[i] <= eps && g[i] < 0.0);
    }
    auto direction = [&](const Eigen::MatrixXd &metric) {
      Vec gf = g;
      for (std::size_t i = 0; i < n; ++i)
        if (frozen[i]) gf[i] = 0.0;
      Vec d = -(metric * gf);
      for (std::size_t i = 0; i < n; ++i)
        if (frozen[i]) d[i] = 0.0;
      return d;
    };

    Vec d = direction(h);
    if (!(g.dot(d) < 0.0)) {
      h.setIdentity();
      fresh = true;
      d = direction(h);
    }

    double alpha = 1.0;
    if (fresh) {
      const double dmax = d.cwiseAbs().maxCoeff();
      if (dmax > 1.0) alpha = 1.0 / dmax;
    }

    bool accepted = false;
    Vec x_new;
    Vec g_new;
    double f_new = f;
    for (int k = 0; k < kMaxBacktracks; ++k, alpha *= 0.5) {
      x_new = project(x + alpha * d);
      const Vec step = x_new - x;
      if (step.cwiseAbs().maxCoeff() == 0.0) break;
      f_new = eval(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + kArmijo * g.dot(step)) {
        accepted = true;
        break;
      }
    }

    ++result.iterations;
    if (!accepted) {
      if (fresh) {
        // Steepest descent cannot make progress at working precision.
        result.converged = true;
        break;
      }
      h.setIdentity();
      fresh = true;
      continue;
    }

    const Vec s = x_new - x;
    const Vec y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm() && sy > 0.0) {
      if (fresh) h *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Vec hy = h * y;
      h -= rho * (hy * s.transpose() + s * hy.transpose());
      h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose());
      fresh = false;
    }

    const double decrease = f - f_new;
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    result.trace.push_back(f);
    if (decrease < tol) {
      result.converged = true;
      break;
    }
  }

  result.x.assign(x.data(), x.data() + n);
  result.value = f;
  return result;
}

}  // namespace photomesh
