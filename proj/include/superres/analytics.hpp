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

#ifndef SUPERRES_ANALYTICS_HPP
#define SUPERRES_ANALYTICS_HPP

#include <functional>
#include <optional>

#include "superres/fisherinfo.hpp"
#include "superres/signal.hpp"
#include "superres/types.hpp"

namespace superres {

/// Ornstein-Uhlenbeck drift of the quadratures inside one shot.
struct OuParams {
    double gamma = 0.0;    // damping, 1/time
    double sigma_n = 0.0;  // diffusion, rad/time^(3/2)
};

struct NoiseSpec {
    std::optional<OuParams> ou;
    double kappa = 0.0;        // probe dephasing rate
    double readout_eps = 0.0;  // outcome flip probability
    double floor_eps = 0.0;    // generic additive floor on the transition probability

    /// Throws ValidationError naming the offending field.
    void validate() const;
    bool is_clean() const noexcept { return !ou && kappa == 0.0 && readout_eps == 0.0 && floor_eps == 0.0; }
};

// ---------------------------------------------------------------------------
// Closed-form transition probabilities. Arguments ending in _t are products
// with the interrogation time, so every function here is scale free.

/// 1/2 (1 - exp(-8 sum_i sigma^2 sin^2(delta_i t / 2) / delta_i^2)).
double p_gaussian(double delta1_t, double delta2_t, double sigma_t);

/// 1/2 (1 - prod_i J0(4 Omega sin(delta_i t / 2) / delta_i)).
double p_bessel(double delta1_t, double delta2_t, double omega_t);

/// Order-zero Bessel function of the first kind.
double bessel_j0(double x);

/// Transition probability of the Ramsey probe for a signal detuned by delta_s
/// from the pulse train, with the amplitude normalized per convention.
double ramsey_probability(double omega_r_t, double delta_s_t, double sigma_t, Convention c);

/// Exact static-quadrature probability for any control, including every noise
/// term that has a closed form. OU drift has none and is rejected.
double transition_probability(const TwoToneSignal& s, const Control& c, const NoiseSpec& noise = {});

/// 1/2 (1 - e^{-2 kappa t} (1 - 2 p_ideal)).
double dephasing_mix(double p_ideal, double kappa_t);

/// (1 - eps) p + eps (1 - p).
double p_readout(double p_ideal, double eps_prime);

/// Same affine map used for a generic floor eps.
double apply_floor(double p_ideal, double eps);

// ---------------------------------------------------------------------------
// Fisher information.

/// (dp)^2 / (p (1 - p)). Throws SingularityError at p in {0, 1}.
double binary_fisher(double p, double dp);

/// Limit of binary_fisher for p = c s^2, dp = 2 c s as s -> 0.
double binary_fisher_limit(double c);

/// FI about omega_r in natural units (t = 1), from the Gaussian model with a
/// central difference of step omega_r * 1e-3.
Labeled fisher_r(double delta_s_t, double sigma_t, double omega_r_t, Convention c);

/// Same for a concrete signal and pulse plan; result in units of t^2. Physical
/// uses the exact pulse-train response, Effective the unit-prefactor idealization.
Labeled fisher_r(const TwoToneSignal& s, const PulsePlan& plan, Convention c);

/// FI about omega_r for p = c omega_r^2 + eps, c = k^2 sigma^2 t^4 / (2 pi^2).
Labeled fisher_with_floor(double sigma_t, double omega_r_t, double eps, Convention c);

struct OuFloor {
    double eps = 0.0;
    double gamma_t = 0.0;
    /// False when gamma t exceeds 0.1 and the leading-order floor is unreliable.
    bool leading_order_ok = true;
};

/// sigma_n^2 t^3 / pi^2 at omega_s t = 2 pi.
OuFloor ou_noise_floor(double sigma_n, double gamma, double t);

/// omega_r / gamma; resolution against an OU floor needs this above 1.
double fourier_limit_ratio(double omega_r, double gamma);

Labeled p_dephasing(double sigma_t, double omega_r_t, double kappa_t);
Labeled fisher_dephasing(double sigma_t, double omega_r_t, double kappa_t);

/// sqrt(eps') / (sigma t).
double readout_resolution_threshold(double eps_prime, double sigma_t);

enum class Regime { Resonant, OffResonant };

/// Number of shots after which the two tones become resolvable.
Labeled sample_complexity(Regime regime, double sigma_t, double omega_r_t, double delta_s_t,
                          Convention c = Convention::Physical);

/// 16 sigma^2 t^4 / pi^2, the ceiling on I_r over all controls.
double fisher_upper_bound(double sigma_t, double t);

/// FI about sigma and about omega_s from the same probability; natural units.
Labeled fisher_sigma(double delta_s_t, double sigma_t, double omega_r_t, Convention c);
Labeled fisher_omega_s(double delta_s_t, double sigma_t, double omega_r_t, Convention c);

struct DetuningOptimum {
    double delta_s_t = 0.0;
    double value = 0.0;
};

/// Maximizes f over detunings in (lo, hi); a coarse scan picks the bracket for golden section.
DetuningOptimum maximize_over_detuning(const std::function<double(double)>& f, double lo = kPi, double hi = kTwoPi);

/// Shot-averaged Ramsey state diag(1 - p, p) in the readout basis as a
/// one-parameter family of theta = (omega_r t).
ParamDensityFamily<double> ramsey_family(double delta_s_t, double sigma_t, Convention c, double fd_step);

}  // namespace superres

#endif
