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

#include "superres/memoryqubit.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "superres/errors.hpp"
#include "superres/montecarlo.hpp"
#include "superres/parallel.hpp"

namespace superres {

namespace {

void check_whole_periods(double big_t, double omega_s) {
    if (!(big_t > 0.0) || !(omega_s > 0.0)) {
        throw InputError("correlation scheme: T and omega_s must be positive");
    }
    const double periods = big_t * omega_s / kTwoPi;
    if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods) || std::round(periods) < 1.0) {
        throw InputError("correlation scheme: T must be an integer multiple of 2 pi / omega_s");
    }
}

template <typename Draw>
McMean mc_mean(std::int64_t draws, RunSeed seed, int threads, Draw&& draw) {
    if (draws < 2) {
        throw InputError("Monte Carlo: need at least two draws");
    }
    std::vector<double> v(static_cast<std::size_t>(draws));
    parallel_for(draws, threads, [&](std::int64_t k) {
        Rng rng(seed.child(static_cast<std::uint64_t>(k)));
        v[static_cast<std::size_t>(k)] = draw(rng);
    });
    const Eigen::Map<const Eigen::VectorXd> x(v.data(), draws);
    McMean r;
    r.draws = draws;
    r.mean = x.mean();
    const double var = (x.array() - r.mean).square().sum() / static_cast<double>(draws - 1);
    r.std_error = std::sqrt(var / static_cast<double>(draws));
    return r;
}

}  // namespace

PhaseState::PhaseState(Eigen::VectorXcd amplitudes, int n, int m, double tau)
    : amplitudes_(std::move(amplitudes)), n_(n), m_(m), tau_(tau) {
    if (amplitudes_.size() != static_cast<Eigen::Index>(n) * m) {
        throw ValidationError("phase state invariant 'N = n m' violated");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
        throw ValidationError("phase state invariant '|psi| = 1' violated");
    }
}

PhaseState build_phase_state(const Quadratures& q, const TwoToneSignal& s, int n, int m) {
    if (n < 3 || m < 2) {
        throw InputError("phase state: need n >= 3 samples per period and m >= 2 periods");
    }
    const std::int64_t big_n = static_cast<std::int64_t>(n) * m;
    if (big_n > kMaxRegister) {
        throw InputError("phase state: n m exceeds the register cap of 65536");
    }
    const double tau = kTwoPi / (n * s.omega_s());
    const double norm = 1.0 / std::sqrt(static_cast<double>(big_n));
    Eigen::VectorXcd psi(big_n);
    for (std::int64_t j = 0; j < big_n; ++j) {
        const double t = static_cast<double>(j) * tau;
        const double phi = tau * (q.a1 * std::cos(s.omega1() * t) + q.b1 * std::sin(s.omega1() * t) +
                                  q.a2 * std::cos(s.omega2() * t) + q.b2 * std::sin(s.omega2() * t));
        psi(j) = std::polar(norm, phi);
    }
    return PhaseState(std::move(psi), n, m, tau);
}

Eigen::VectorXd dft_spectrum(const PhaseState& state) {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> in(state.amplitudes().data(), state.amplitudes().data() + state.size());
    std::vector<std::complex<double>> out;
    fft.fwd(out, in);
    // The forward transform is unnormalized; 1/N on |.|^2 makes it unitary.
    Eigen::VectorXd p(state.size());
    const double scale = 1.0 / static_cast<double>(state.size());
    for (Eigen::Index k = 0; k < state.size(); ++k) {
        p(k) = std::norm(out[static_cast<std::size_t>(k)]) * scale;
    }
    return p;
}

double nonharmonic_probability(const Eigen::VectorXd& spectrum, int n, int m) {
    if (spectrum.size() != static_cast<Eigen::Index>(n) * m || m < 1) {
        throw InputError("nonharmonic_probability: spectrum length must be n m");
    }
    double total = 0.0;
    for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
        if (k % m != 0) {
            total += spectrum(k);
        }
    }
    return total;
}

double qft_fisher(double sigma, double tau, double big_t) {
    const double st = sigma * tau * big_t;
    return 2.0 / 3.0 * st * st;
}

double correlation_probability(double sigma, double tau, double big_t, double omega_s, double omega_r) {
    check_whole_periods(big_t, omega_s);
    const double x = sigma * tau * omega_r * big_t;
    return 2.0 * x * x;
}

double correlation_fisher(double sigma, double tau, double big_t, double omega_s) {
    check_whole_periods(big_t, omega_s);
    const double st = sigma * tau * big_t;
    return 8.0 * st * st;
}

double window_phase(const Quadratures& q, const TwoToneSignal& s, double start, double tau) {
    auto tone = [&](double a, double b, double w) {
        const double t1 = start + tau;
        return (a * (std::sin(w * t1) - std::sin(w * start)) + b * (std::cos(w * start) - std::cos(w * t1))) / w;
    };
    return tone(q.a1, q.b1, s.omega1()) + tone(q.a2, q.b2, s.omega2());
}

double correlation_shot_probability(const Quadratures& q, const TwoToneSignal& s, double tau, double big_t) {
    const double d = std::sin(window_phase(q, s, 0.0, tau) - window_phase(q, s, big_t, tau));
    return d * d;
}

McMean qft_nonharmonic_mc(const TwoToneSignal& s, int n, int m, std::int64_t draws, RunSeed seed, int threads) {
    return mc_mean(draws, seed, threads, [&](Rng& rng) {
        const Quadratures q = draw_quadratures(s.amplitude(), rng);
        return nonharmonic_probability(dft_spectrum(build_phase_state(q, s, n, m)), n, m);
    });
}

McMean correlation_mc(const TwoToneSignal& s, double tau, double big_t, std::int64_t draws, RunSeed seed,
                      int threads) {
    check_whole_periods(big_t, s.omega_s());
    if (!(tau > 0.0)) {
        throw InputError("correlation scheme: tau must be positive");
    }
    return mc_mean(draws, seed, threads, [&](Rng& rng) {
        return correlation_shot_probability(draw_quadratures(s.amplitude(), rng), s, tau, big_t);
    });
}

}  // namespace superres
