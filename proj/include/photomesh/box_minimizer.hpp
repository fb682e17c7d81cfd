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

#include <functional>
#include <span>
#include <vector>

namespace photomesh {

/// f(x, grad) -> value; must fill grad.
using ObjectiveWithGradient =
    std::function<double(std::span<const double>, std::span<double>)>;

struct BoxMinimizerResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // value at start and after each accepted step
};

/// Projected BFGS (two-metric projection) for lower <= x <= upper. Bound
/// variables whose gradient pushes outward are frozen for the step; the rest
/// follow a quasi-Newton direction along the projected Armijo arc, so the
/// objective never increases. Use +/-infinity for unbounded coordinates.
///
/// Stops with converged = true when the projected gradient infinity-norm or
/// the decrease over an iteration drops below `tol`.
BoxMinimizerResult minimize_box(const ObjectiveWithGradient &fn, std::vector<double> x0,
                                const std::vector<double> &lower,
                                const std::vector<double> &upper, int max_iters,
                                double tol);

}  // namespace photomesh
