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

#include "superres/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "superres/errors.hpp"

namespace superres {

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                                      int max_iter) {
    if (!(hi > lo)) {
        throw InputError("golden section: empty bracket");
    }
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    int it = 0;
    for (; it < max_iter; ++it) {
        const double scale = std::max(std::abs(0.5 * (a + b)), 1e-300);
        if (b - a <= rel_tol * scale) {
            break;
        }
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? ScalarOptimum{c, fc, it} : ScalarOptimum{d, fd, it};
}

VectorOptimum nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                                   const Eigen::VectorXd& step, const NelderMeadOptions& opts) {
    const Eigen::Index n = x0.size();
    if (n == 0 || step.size() != n) {
        throw InputError("nelder-mead: start and step sizes must match and be nonempty");
    }
    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> val(n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        pts[i + 1](i) += step(i);
    }
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    for (Eigen::Index i = 0; i <= n; ++i) {
        val[i] = eval(pts[i]);
    }
    std::vector<Eigen::Index> order(n + 1);
    VectorOptimum out;
    while (evals < opts.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return val[i] < val[j]; });
        const Eigen::Index best = order.front();
        const Eigen::Index worst = order.back();
        const Eigen::Index second = order[n - 1];

        double spread = 0.0;
        double diam = 0.0;
        for (Eigen::Index i = 0; i <= n; ++i) {
            spread = std::max(spread, std::abs(val[i] - val[best]));
            diam = std::max(diam, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
        }
        if (spread <= opts.f_tol * (std::abs(val[best]) + opts.f_tol) &&
            diam <= opts.x_tol * std::max(1.0, pts[best].cwiseAbs().maxCoeff())) {
            out.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i <= n; ++i) {
            if (i != worst) {
                centroid += pts[i];
            }
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        const double fr = eval(xr);
        if (fr < val[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                val[worst] = fe;
            } else {
                pts[worst] = xr;
                val[worst] = fr;
            }
            continue;
        }
        if (fr < val[second]) {
            pts[worst] = xr;
            val[worst] = fr;
            continue;
        }
        const bool outside = fr < val[worst];
        const Eigen::VectorXd xc =
            outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid)) : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : val[worst])) {
            pts[worst] = xc;
            val[worst] = fc;
            continue;
        }
        for (Eigen::Index i = 0; i <= n; ++i) {
            if (i != best) {
                pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                val[i] = eval(pts[i]);
            }
        }
    }
    const auto it = std::min_element(val.begin(), val.end());
    out.x = pts[static_cast<std::size_t>(it - val.begin())];
    out.value = *it;
    out.evaluations = evals;
    return out;
}

}  // namespace superres
