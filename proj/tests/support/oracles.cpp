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

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <variant>

namespace superres::testing {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) {
        ++n;
    }
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    }
    return s * h / 3.0;
}

double integrated_phase(const Quadratures& q, const TwoToneSignal& s, const Control& c, int panels) {
    const double w1 = s.omega_s() + s.omega_r();
    const double w2 = s.omega_s() - s.omega_r();
    auto h = [&](double t) {
        return q.a1 * std::cos(w1 * t) + q.b1 * std::sin(w1 * t) + q.a2 * std::cos(w2 * t) + q.b2 * std::sin(w2 * t);
    };
    if (const auto* f = std::get_if<FreeEvolution>(&c)) {
        return simpson(h, 0.0, f->t, panels > 0 ? panels : 20000);
    }
    if (const auto* plan = std::get_if<PulsePlan>(&c)) {
        // Integrate each constant-sign segment separately so the kinks sit on panel edges.
        double total = 0.0;
        const int per = panels > 0 ? panels : 200;
        for (std::int64_t k = 0; k < plan->n_pulses(); ++k) {
            const double a = static_cast<double>(k) * plan->tau();
            total += (k % 2 == 0 ? 1.0 : -1.0) * simpson(h, a, a + plan->tau(), per);
        }
        return total;
    }
    const auto& e = std::get<EffectiveProbe>(c);
    const double k = e.convention == Convention::Physical ? 2.0 / std::numbers::pi : 1.0;
    const double d1 = e.omega_p - w1;
    const double d2 = e.omega_p - w2;
    auto g = [&](double t) {
        return k * (q.a1 * std::sin(d1 * t) + q.b1 * std::cos(d1 * t) + q.a2 * std::sin(d2 * t) +
                    q.b2 * std::cos(d2 * t));
    };
    return simpson(g, 0.0, e.t, panels > 0 ? panels : 20000);
}

double j0_integral(double x) {
    return simpson([x](double th) { return std::cos(x * std::sin(th)); }, 0.0, std::numbers::pi, 4000) /
           std::numbers::pi;
}

double ou_phase_variance(double omega1, double omega2, double gamma, double sigma_n, double t) {
    double total = 0.0;
    for (const double w : {omega1, omega2}) {
        for (int quad = 0; quad < 2; ++quad) {
            auto inner = [&](double s) {
                const double v = simpson(
                    [&](double u) { return (quad == 0 ? std::cos(w * u) : std::sin(w * u)) * std::exp(-gamma * (u - s)); },
                    s, t, 200);
                return v * v;
            };
            total += sigma_n * sigma_n * simpson(inner, 0.0, t, 200);
        }
    }
    return total;
}

}  // namespace superres::testing
