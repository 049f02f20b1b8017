// Copyright 2026 The superres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUPERRES_OPTIMIZE_HPP
#define SUPERRES_OPTIMIZE_HPP

#include <functional>

#include <Eigen/Dense>

namespace superres {

struct ScalarOptimum {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi]. Stops
/// once the bracket is below rel_tol * |x| (or rel_tol when x is near 0).
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double rel_tol = 1e-10, int max_iter = 400);

struct NelderMeadOptions {
    double x_tol = 1e-10;
    double f_tol = 1e-12;
    int max_evals = 4000;
};

struct VectorOptimum {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Downhill simplex minimization started from x0 with per-axis initial steps.
VectorOptimum nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                                   const Eigen::VectorXd& step, const NelderMeadOptions& opts = {});

}  // namespace superres

#endif
