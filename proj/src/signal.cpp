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

#include "superres/signal.hpp"

#include <cmath>
#include <sstream>

#include "superres/errors.hpp"

namespace superres {

namespace {

// Relative distance of omega*tau/pi from the nearest odd integer.
constexpr double kSpacingTol = 1e-6;

// sin(d t)/d and (1 - cos(d t))/d, continuous at d = 0.
double sin_over(double d, double t) { return d == 0.0 ? t : std::sin(d * t) / d; }
double versin_over(double d, double t) {
    if (d == 0.0) {
        return 0.0;
    }
    const double s = std::sin(0.5 * d * t);
    return 2.0 * s * s / d;
}

}  // namespace

TwoToneSignal::TwoToneSignal(double omega_s, double omega_r, AmplitudeModel amplitude)
    : omega_s_(omega_s), omega_r_(omega_r), amplitude_(amplitude) {
    if (!(omega_s > 0.0) || !std::isfinite(omega_s)) {
        throw ValidationError("signal invariant 'omega_s > 0' violated");
    }
    if (!(std::abs(omega_r) < omega_s)) {
        throw ValidationError("signal invariant '|omega_r| < omega_s' violated");
    }
    if (!(amplitude_parameter() >= 0.0) || !std::isfinite(amplitude_parameter())) {
        throw ValidationError("signal invariant 'amplitude >= 0' violated");
    }
}

double TwoToneSignal::amplitude_parameter() const noexcept {
    return std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, GaussianIID>) {
                return m.sigma;
            } else {
                return m.omega_amp;
            }
        },
        amplitude_);
}

PulsePlan::PulsePlan(double tau, std::int64_t n_pulses) : tau_(tau), n_pulses_(n_pulses) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ValidationError("pulse plan invariant 'tau > 0' violated");
    }
    if (n_pulses < 1) {
        throw ValidationError("pulse plan invariant 'n_pulses >= 1' violated");
    }
}

PulsePlan PulsePlan::for_detuning(double omega_s, double delta_s_t, std::int64_t n_pulses) {
    if (!(omega_s > 0.0)) {
        throw InputError("for_detuning: omega_s must be positive");
    }
    const double n = static_cast<double>(n_pulses);
    const double t = (n * kPi - delta_s_t) / omega_s;
    if (!(t > 0.0)) {
        throw InputError("for_detuning: too few pulses for the requested detuning");
    }
    return PulsePlan(t / n, n_pulses);
}

double PulsePlan::detuning_phase(double omega) const noexcept {
    return static_cast<double>(n_pulses_) * kPi - omega * total_time();
}

int PulsePlan::sign_at(double t) const noexcept {
    const auto k = static_cast<std::int64_t>(std::floor(t / tau_));
    return (k % 2 == 0) ? 1 : -1;
}

void PulsePlan::check_spacing(double omega) const {
    const double x = omega * tau_ / kPi;
    const double nearest_odd = 2.0 * std::round((x - 1.0) / 2.0) + 1.0;
    if (std::abs(x - nearest_odd) < kSpacingTol) {
        std::ostringstream os;
        os << "singular pulse spacing: omega*tau = " << x << " pi is an odd multiple of pi";
        throw SingularSpacingError(os.str());
    }
}

void PulsePlan::check_spacing(const TwoToneSignal& s) const {
    check_spacing(s.omega_s());
    check_spacing(s.omega1());
    check_spacing(s.omega2());
}

double control_time(const Control& c) noexcept {
    return std::visit(
        [](const auto& v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, PulsePlan>) {
                return v.total_time();
            } else {
                return v.t;
            }
        },
        c);
}

PhaseResponse phase_response(const TwoToneSignal& s, const Control& c) {
    PhaseResponse r;
    const auto w = s.tones();
    if (const auto* f = std::get_if<FreeEvolution>(&c)) {
        if (!(f->t > 0.0)) {
            throw InputError("free evolution: t must be positive");
        }
        for (int i = 0; i < 2; ++i) {
            r.ca[i] = sin_over(w[i], f->t);
            r.cb[i] = versin_over(w[i], f->t);
        }
    } else if (const auto* plan = std::get_if<PulsePlan>(&c)) {
        plan->check_spacing(s);
        for (int i = 0; i < 2; ++i) {
            const double g = std::tan(0.5 * w[i] * plan->tau()) / w[i];
            const double u = plan->detuning_phase(w[i]);
            const double sh = std::sin(0.5 * u);
            r.ca[i] = g * 2.0 * sh * sh;
            r.cb[i] = g * std::sin(u);
        }
    } else {
        const auto& e = std::get<EffectiveProbe>(c);
        if (!(e.t > 0.0)) {
            throw InputError("effective probe: t must be positive");
        }
        const double k = amplitude_scale(e.convention);
        for (int i = 0; i < 2; ++i) {
            const double d = e.omega_p - w[i];
            r.ca[i] = k * versin_over(d, e.t);
            r.cb[i] = k * sin_over(d, e.t);
        }
    }
    return r;
}

double accumulated_phase_free(const Quadratures& q, const TwoToneSignal& s, double t) {
    return phase_response(s, FreeEvolution{t}).phase(q);
}

double accumulated_phase_pulsed(double sin_amp, double cos_amp, double omega, const PulsePlan& plan) {
    plan.check_spacing(omega);
    const double g = std::tan(0.5 * omega * plan.tau()) / omega;
    const double u = plan.detuning_phase(omega);
    const double sh = std::sin(0.5 * u);
    return g * (sin_amp * std::sin(u) + cos_amp * 2.0 * sh * sh);
}

double accumulated_phase_pulsed(const Quadratures& q, const TwoToneSignal& s, const PulsePlan& plan) {
    return accumulated_phase_pulsed(q.b1, q.a1, s.omega1(), plan) + accumulated_phase_pulsed(q.b2, q.a2, s.omega2(), plan);
}

double effective_prefactor(double omega, double tau) {
    if (!(omega > 0.0) || !(tau > 0.0)) {
        throw InputError("effective_prefactor: omega and tau must be positive");
    }
    PulsePlan(tau, 1).check_spacing(omega);
    const double delta = kPi / tau - omega;
    return std::tan(0.5 * omega * tau) * delta / omega;
}

Eigen::MatrixXd gradient_matrix(const SpanParams& p, std::span<const double> times) {
    Eigen::MatrixXd g(6, static_cast<Index>(times.size()));
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        const double sa = std::sin(p.omega_s * t + p.alpha);
        const double ca = std::cos(p.omega_s * t + p.alpha);
        const double sb = std::sin(p.omega_s * t + p.beta);
        const double cb = std::cos(p.omega_s * t + p.beta);
        const auto c = static_cast<Index>(j);
        g(0, c) = p.a * t * ca + p.b * p.omega_r * t * t * cb;
        g(1, c) = p.b * t * sb;
        g(2, c) = sa;
        g(3, c) = p.omega_r * t * sb;
        g(4, c) = p.a * ca;
        g(5, c) = p.b * p.omega_r * t * cb;
    }
    return g;
}

int gradient_span_rank(const SpanParams& p, std::span<const double> times) {
    if (times.size() < 6) {
        throw InputError("gradient_span_rank: at least 6 sample times are required");
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(gradient_matrix(p, times));
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) {
        return 0;
    }
    int rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        rank += sv(i) > 1e-10 * sv(0) ? 1 : 0;
    }
    return rank;
}

}  // namespace superres
