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

#ifndef SUPERRES_SIGNAL_HPP
#define SUPERRES_SIGNAL_HPP

#include <array>
#include <cstdint>
#include <span>
#include <variant>

#include <Eigen/Dense>

#include "superres/types.hpp"

namespace superres {

/// Quadratures drawn i.i.d. normal with standard deviation sigma.
struct GaussianIID {
    double sigma = 0.0;
};

/// Fixed amplitude Omega with a uniformly random phase per tone.
struct FixedAmpUniformPhase {
    double omega_amp = 0.0;
};

using AmplitudeModel = std::variant<GaussianIID, FixedAmpUniformPhase>;

/// Two tones at omega_s +- omega_r:
///   H = sum_i [A_i cos(w_i t) + B_i sin(w_i t)] sigma_z / 2.
class TwoToneSignal {
   public:
    TwoToneSignal(double omega_s, double omega_r, AmplitudeModel amplitude);

    double omega_s() const noexcept { return omega_s_; }
    double omega_r() const noexcept { return omega_r_; }
    double omega1() const noexcept { return omega_s_ + omega_r_; }
    double omega2() const noexcept { return omega_s_ - omega_r_; }
    std::array<double, 2> tones() const noexcept { return {omega1(), omega2()}; }
    const AmplitudeModel& amplitude() const noexcept { return amplitude_; }
    bool is_gaussian() const noexcept { return std::holds_alternative<GaussianIID>(amplitude_); }
    /// sigma for the Gaussian model, Omega for the fixed-amplitude model.
    double amplitude_parameter() const noexcept;

    TwoToneSignal with_omega_s(double w) const { return {w, omega_r_, amplitude_}; }
    TwoToneSignal with_omega_r(double w) const { return {omega_s_, w, amplitude_}; }
    TwoToneSignal with_amplitude(AmplitudeModel a) const { return {omega_s_, omega_r_, a}; }

   private:
    double omega_s_;
    double omega_r_;
    AmplitudeModel amplitude_;
};

struct Quadratures {
    double a1 = 0.0;
    double b1 = 0.0;
    double a2 = 0.0;
    double b2 = 0.0;
};

/// Train of n_pulses pi-pulses spaced tau apart; the sign function h(t) flips
/// at every pulse and the sequence lasts t = n_pulses * tau.
class PulsePlan {
   public:
    PulsePlan(double tau, std::int64_t n_pulses);

    /// Plan whose detuning from omega_s times its duration equals delta_s_t.
    static PulsePlan for_detuning(double omega_s, double delta_s_t, std::int64_t n_pulses);

    double tau() const noexcept { return tau_; }
    std::int64_t n_pulses() const noexcept { return n_pulses_; }
    double total_time() const noexcept { return static_cast<double>(n_pulses_) * tau_; }
    double pulse_frequency() const noexcept { return kPi / tau_; }
    double detuning(double omega) const noexcept { return kPi / tau_ - omega; }
    /// delta*t for a tone, formed as N*pi - omega*t.
    double detuning_phase(double omega) const noexcept;
    int sign_at(double t) const noexcept;

    /// Throws SingularSpacingError when omega*tau sits on an odd multiple of pi.
    void check_spacing(double omega) const;
    void check_spacing(const TwoToneSignal& s) const;

   private:
    double tau_;
    std::int64_t n_pulses_;
};

/// No control at all: the sensor integrates the bare signal for time t.
struct FreeEvolution {
    double t = 1.0;
};

/// Idealized pulse train: each tone appears at its detuning delta_i = omega_p - w_i
/// with amplitude scaled by the convention prefactor, for time t.
struct EffectiveProbe {
    double omega_p = 0.0;
    double t = 1.0;
    Convention convention = Convention::Physical;
};

using Control = std::variant<FreeEvolution, PulsePlan, EffectiveProbe>;

double control_time(const Control& c) noexcept;

/// Static quadratures enter the phase linearly:
///   phi = sum_i ca[i] * A_i + cb[i] * B_i.
struct PhaseResponse {
    std::array<double, 2> ca{};
    std::array<double, 2> cb{};

    double phase(const Quadratures& q) const noexcept {
        return ca[0] * q.a1 + cb[0] * q.b1 + ca[1] * q.a2 + cb[1] * q.b2;
    }
    /// ca^2 + cb^2 for tone i.
    double gain2(int i) const noexcept { return ca[i] * ca[i] + cb[i] * cb[i]; }
};

PhaseResponse phase_response(const TwoToneSignal& s, const Control& c);

double accumulated_phase_free(const Quadratures& q, const TwoToneSignal& s, double t);

/// Single tone (sin_amp sin(wt) + cos_amp cos(wt)) h(t) integrated over the plan.
double accumulated_phase_pulsed(double sin_amp, double cos_amp, double omega, const PulsePlan& plan);

/// Both tones, each at its own detuning from the shared spacing.
double accumulated_phase_pulsed(const Quadratures& q, const TwoToneSignal& s, const PulsePlan& plan);

/// tan(w tau / 2) * delta / w with delta = pi / tau - w.
double effective_prefactor(double omega, double tau);

/// Parameters of f(t) = a sin(w_s t + alpha) + b w_r t sin(w_s t + beta).
struct SpanParams {
    double omega_s = 1.0;
    double omega_r = 0.0;
    double a = 1.0;
    double b = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// 6 x |times| matrix of df/d(w_s, w_r, a, b, alpha, beta).
Eigen::MatrixXd gradient_matrix(const SpanParams& p, std::span<const double> times);

/// Numerical rank of the gradient matrix (singular values above 1e-10 of the largest).
int gradient_span_rank(const SpanParams& p, std::span<const double> times);

}  // namespace superres

#endif
