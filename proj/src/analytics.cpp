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

#include "superres/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "superres/errors.hpp"
#include "superres/optimize.hpp"

namespace superres {

namespace {

// sin^2(u/2) / u^2 with its series below |u| = 1e-4.
double sinc2_half(double u) {
    if (std::abs(u) < 1e-4) {
        return 0.25 - u * u / 48.0;
    }
    const double s = std::sin(0.5 * u);
    return s * s / (u * u);
}

// 4 sin(u/2) / u, the Bessel argument per unit amplitude.
double bessel_arg(double u) {
    if (std::abs(u) < 1e-4) {
        return 2.0 * (1.0 - u * u / 24.0);
    }
    return 4.0 * std::sin(0.5 * u) / u;
}

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InputError(std::string(what) + " must be a finite nonnegative number");
    }
}

void require_half_open_prob(double v, const char* what) {
    if (!(v >= 0.0 && v < 0.5)) {
        throw InputError(std::string(what) + " must lie in [0, 0.5)");
    }
}

bool is_resonant(double delta_s_t) {
    const double n = std::round(delta_s_t / kTwoPi);
    return n >= 1.0 && std::abs(delta_s_t - n * kTwoPi) <= 1e-9 * std::max(1.0, std::abs(delta_s_t));
}

}  // namespace

void NoiseSpec::validate() const {
    if (!(kappa >= 0.0)) {
        throw ValidationError("noise.kappa must be nonnegative");
    }
    if (!(readout_eps >= 0.0 && readout_eps < 0.5)) {
        throw ValidationError("noise.readout_eps must lie in [0, 0.5)");
    }
    if (!(floor_eps >= 0.0 && floor_eps < 0.5)) {
        throw ValidationError("noise.floor_eps must lie in [0, 0.5)");
    }
    if (ou) {
        if (!(ou->gamma > 0.0)) {
            throw ValidationError("noise.ou.gamma must be positive");
        }
        if (!(ou->sigma_n >= 0.0)) {
            throw ValidationError("noise.ou.sigma_n must be nonnegative");
        }
    }
}

double p_gaussian(double delta1_t, double delta2_t, double sigma_t) {
    require_nonnegative(sigma_t, "sigma_t");
    const double e = 8.0 * sigma_t * sigma_t * (sinc2_half(delta1_t) + sinc2_half(delta2_t));
    return -0.5 * std::expm1(-e);
}

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

double p_bessel(double delta1_t, double delta2_t, double omega_t) {
    require_nonnegative(omega_t, "omega_t");
    return 0.5 * (1.0 - bessel_j0(omega_t * bessel_arg(delta1_t)) * bessel_j0(omega_t * bessel_arg(delta2_t)));
}

double ramsey_probability(double omega_r_t, double delta_s_t, double sigma_t, Convention c) {
    return p_gaussian(delta_s_t - omega_r_t, delta_s_t + omega_r_t, amplitude_scale(c) * sigma_t);
}

double dephasing_mix(double p_ideal, double kappa_t) {
    require_nonnegative(kappa_t, "kappa_t");
    return 0.5 * (1.0 - std::exp(-2.0 * kappa_t) * (1.0 - 2.0 * p_ideal));
}

double p_readout(double p_ideal, double eps_prime) {
    require_half_open_prob(eps_prime, "readout eps'");
    return (1.0 - eps_prime) * p_ideal + eps_prime * (1.0 - p_ideal);
}

double apply_floor(double p_ideal, double eps) {
    require_half_open_prob(eps, "floor eps");
    return (1.0 - eps) * p_ideal + eps * (1.0 - p_ideal);
}

double transition_probability(const TwoToneSignal& s, const Control& c, const NoiseSpec& noise) {
    noise.validate();
    if (noise.ou) {
        throw PreconditionError("transition_probability: OU drift has no closed form; simulate it instead");
    }
    const PhaseResponse r = phase_response(s, c);
    const double amp = s.amplitude_parameter();
    double p = 0.0;
    double mean_cos2 = 1.0;  // <cos 2 phi>
    if (s.is_gaussian()) {
        const double e = 2.0 * amp * amp * (r.gain2(0) + r.gain2(1));
        p = -0.5 * std::expm1(-e);
        mean_cos2 = std::exp(-e);
    } else {
        mean_cos2 = bessel_j0(2.0 * amp * std::sqrt(r.gain2(0))) * bessel_j0(2.0 * amp * std::sqrt(r.gain2(1)));
        p = 0.5 * (1.0 - mean_cos2);
    }
    if (noise.kappa > 0.0) {
        p = 0.5 * (1.0 - std::exp(-2.0 * noise.kappa * control_time(c)) * mean_cos2);
    }
    if (noise.floor_eps > 0.0) {
        p = apply_floor(p, noise.floor_eps);
    }
    if (noise.readout_eps > 0.0) {
        p = p_readout(p, noise.readout_eps);
    }
    return p;
}

double binary_fisher(double p, double dp) {
    if (!(p > 0.0 && p < 1.0)) {
        throw SingularityError("binary_fisher: p = " + std::to_string(p) + " has no finite two-outcome FI");
    }
    return dp * dp / (p * (1.0 - p));
}

double binary_fisher_limit(double c) {
    require_nonnegative(c, "binary_fisher_limit c");
    return 4.0 * c;
}

Labeled fisher_r(double delta_s_t, double sigma_t, double omega_r_t, Convention c) {
    if (omega_r_t == 0.0) {
        throw InputError("fisher_r: omega_r t = 0 is excluded; evaluate at a small positive separation");
    }
    const double h = std::abs(omega_r_t) * 1e-3;
    const double p = ramsey_probability(omega_r_t, delta_s_t, sigma_t, c);
    const double dp = (ramsey_probability(omega_r_t + h, delta_s_t, sigma_t, c) -
                       ramsey_probability(omega_r_t - h, delta_s_t, sigma_t, c)) /
                      (2.0 * h);
    return {binary_fisher(p, dp), c};
}

Labeled fisher_r(const TwoToneSignal& s, const PulsePlan& plan, Convention c) {
    plan.check_spacing(s);
    const double t = plan.total_time();
    const double x = s.omega_r() * t;
    if (x == 0.0) {
        throw InputError("fisher_r: omega_r = 0 is excluded; evaluate at a small positive separation");
    }
    // Physical: the pulse train itself. Effective: each tone at its detuning with unit prefactor.
    const double omega_p = plan.pulse_frequency();
    auto prob = [&](double xx) {
        const TwoToneSignal v = s.with_omega_r(xx / t);
        if (c == Convention::Physical) {
            return transition_probability(v, plan);
        }
        return transition_probability(v, EffectiveProbe{omega_p, t, Convention::Effective});
    };
    const double h = std::abs(x) * 1e-3;
    const double dp = (prob(x + h) - prob(x - h)) / (2.0 * h);
    return {t * t * binary_fisher(prob(x), dp), c};
}

Labeled fisher_with_floor(double sigma_t, double omega_r_t, double eps, Convention c) {
    require_nonnegative(sigma_t, "sigma_t");
    require_half_open_prob(eps, "floor eps");
    const double k = amplitude_scale(c);
    const double cc = k * k * sigma_t * sigma_t / (2.0 * kPi * kPi);
    if (omega_r_t == 0.0) {
        return {eps == 0.0 ? binary_fisher_limit(cc) : 0.0, c};
    }
    const double p = cc * omega_r_t * omega_r_t + eps;
    if (!(p < 1.0)) {
        throw InputError("fisher_with_floor: quadratic model leaves [0, 1]");
    }
    return {binary_fisher(p, 2.0 * cc * omega_r_t), c};
}

OuFloor ou_noise_floor(double sigma_n, double gamma, double t) {
    require_nonnegative(sigma_n, "sigma_n");
    require_nonnegative(gamma, "gamma");
    if (!(t > 0.0)) {
        throw InputError("ou_noise_floor: t must be positive");
    }
    OuFloor f;
    f.eps = sigma_n * sigma_n * t * t * t / (kPi * kPi);
    f.gamma_t = gamma * t;
    f.leading_order_ok = f.gamma_t <= 0.1;
    if (!(f.eps < 0.5)) {
        throw InputError("ou_noise_floor: sigma_n^2 t^3 / pi^2 = " + std::to_string(f.eps) +
                         " is not a valid probability floor");
    }
    return f;
}

double fourier_limit_ratio(double omega_r, double gamma) {
    if (!(gamma > 0.0)) {
        throw InputError("fourier_limit_ratio: gamma must be positive");
    }
    return std::abs(omega_r) / gamma;
}

Labeled p_dephasing(double sigma_t, double omega_r_t, double kappa_t) {
    require_nonnegative(sigma_t, "sigma_t");
    require_nonnegative(kappa_t, "kappa_t");
    const double e = sigma_t * sigma_t * omega_r_t * omega_r_t / (kPi * kPi) + 2.0 * kappa_t;
    return {-0.5 * std::expm1(-e), Convention::Effective};
}

Labeled fisher_dephasing(double sigma_t, double omega_r_t, double kappa_t) {
    require_nonnegative(sigma_t, "sigma_t");
    require_nonnegative(kappa_t, "kappa_t");
    const double s2 = sigma_t * sigma_t;
    const double x2 = omega_r_t * omega_r_t;
    if (x2 == 0.0) {
        return {kappa_t == 0.0 ? 2.0 * s2 / (kPi * kPi) : 0.0, Convention::Effective};
    }
    const double den = std::pow(kPi, 4) * std::expm1(4.0 * kappa_t + 2.0 * x2 * s2 / (kPi * kPi));
    return {4.0 * x2 * s2 * s2 / den, Convention::Effective};
}

double readout_resolution_threshold(double eps_prime, double sigma_t) {
    require_half_open_prob(eps_prime, "readout eps'");
    if (!(sigma_t > 0.0)) {
        throw InputError("readout threshold: sigma_t must be positive");
    }
    return std::sqrt(eps_prime) / sigma_t;
}

Labeled sample_complexity(Regime regime, double sigma_t, double omega_r_t, double delta_s_t, Convention c) {
    if (omega_r_t == 0.0) {
        throw InputError("sample_complexity: omega_r t must be nonzero");
    }
    const bool resonant = is_resonant(delta_s_t);
    const double x = omega_r_t;
    const double p = ramsey_probability(x, delta_s_t, sigma_t, c);
    if (regime == Regime::Resonant) {
        if (!resonant) {
            throw InputError("sample_complexity: resonant regime needs delta_s t = 2 pi n");
        }
        return {1.0 / p, c};
    }
    if (resonant) {
        throw InputError("sample_complexity: off-resonant regime requested at a resonance");
    }
    const double h = 0.1 * std::abs(x);
    const double d2 = (ramsey_probability(x + h, delta_s_t, sigma_t, c) - 2.0 * p +
                       ramsey_probability(x - h, delta_s_t, sigma_t, c)) /
                      (h * h);
    return {p * (1.0 - p) / (d2 * d2 * x * x * x * x), c};
}

double fisher_upper_bound(double sigma_t, double t) {
    require_nonnegative(sigma_t, "sigma_t");
    return 16.0 * sigma_t * sigma_t * t * t / (kPi * kPi);
}

namespace {

double fisher_or_zero(double p, double dp) {
    if (p <= 0.0 && dp == 0.0) {
        return 0.0;
    }
    return binary_fisher(p, dp);
}

}  // namespace

Labeled fisher_sigma(double delta_s_t, double sigma_t, double omega_r_t, Convention c) {
    if (!(sigma_t > 0.0)) {
        throw InputError("fisher_sigma: sigma_t must be positive");
    }
    const double h = sigma_t * 1e-5;
    const double p = ramsey_probability(omega_r_t, delta_s_t, sigma_t, c);
    const double dp = (ramsey_probability(omega_r_t, delta_s_t, sigma_t + h, c) -
                       ramsey_probability(omega_r_t, delta_s_t, sigma_t - h, c)) /
                      (2.0 * h);
    return {fisher_or_zero(p, dp), c};
}

Labeled fisher_omega_s(double delta_s_t, double sigma_t, double omega_r_t, Convention c) {
    const double h = 1e-6;
    const double p = ramsey_probability(omega_r_t, delta_s_t, sigma_t, c);
    const double dp = (ramsey_probability(omega_r_t, delta_s_t + h, sigma_t, c) -
                       ramsey_probability(omega_r_t, delta_s_t - h, sigma_t, c)) /
                      (2.0 * h);
    return {fisher_or_zero(p, dp), c};
}

DetuningOptimum maximize_over_detuning(const std::function<double(double)>& f, double lo, double hi) {
    if (!(hi > lo)) {
        throw InputError("maximize_over_detuning: empty bracket");
    }
    constexpr int kCoarse = 64;
    const double step = (hi - lo) / (kCoarse + 1);
    int best = 1;
    double best_val = f(lo + step);
    for (int i = 2; i <= kCoarse; ++i) {
        const double v = f(lo + i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const ScalarOptimum o = golden_section_maximize(f, lo + (best - 1) * step, lo + (best + 1) * step, 1e-10);
    return {o.x, o.value};
}

ParamDensityFamily<double> ramsey_family(double delta_s_t, double sigma_t, Convention c, double fd_step) {
    if (!(sigma_t >= 0.0)) {
        throw InputError("ramsey family: sigma t must be non-negative");
    }
    auto eval = [=](const Eigen::VectorXd& th) {
        const double p = ramsey_probability(th(0), delta_s_t, sigma_t, c);
        ComplexMatrix<double> rho = ComplexMatrix<double>::Zero(2, 2);
        rho(0, 0) = 1.0 - p;
        rho(1, 1) = p;
        return DensityMatrix<double>(rho);
    };
    return ParamDensityFamily<double>(eval, Eigen::VectorXd::Constant(1, fd_step));
}

}  // namespace superres
