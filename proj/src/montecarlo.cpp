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

#include "superres/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "superres/errors.hpp"
#include "superres/parallel.hpp"

namespace superres {

Quadratures draw_quadratures(const AmplitudeModel& model, Rng& rng) {
    if (const auto* g = std::get_if<GaussianIID>(&model)) {
        Quadratures q;
        q.a1 = g->sigma * rng.normal();
        q.b1 = g->sigma * rng.normal();
        q.a2 = g->sigma * rng.normal();
        q.b2 = g->sigma * rng.normal();
        return q;
    }
    const double amp = std::get<FixedAmpUniformPhase>(model).omega_amp;
    const double t1 = kTwoPi * rng.uniform();
    const double t2 = kTwoPi * rng.uniform();
    return {amp * std::cos(t1), amp * std::sin(t1), amp * std::cos(t2), amp * std::sin(t2)};
}

double shot_probability(double phi, double kappa_t, const NoiseSpec& noise) {
    double p = 0.0;
    if (kappa_t > 0.0) {
        p = 0.5 * (1.0 - std::exp(-2.0 * kappa_t) * std::cos(2.0 * phi));
    } else {
        const double s = std::sin(phi);
        p = s * s;
    }
    if (noise.floor_eps > 0.0) {
        p = (1.0 - noise.floor_eps) * p + noise.floor_eps * (1.0 - p);
    }
    if (noise.readout_eps > 0.0) {
        p = (1.0 - noise.readout_eps) * p + noise.readout_eps * (1.0 - p);
    }
    return p;
}

ShotBatch simulate_batch(const BatchSettings& settings, std::int64_t n_shots, RunSeed seed, const SimOptions& opts) {
    if (n_shots < 1) {
        throw InputError("simulate_batch: n_shots must be at least 1");
    }
    settings.noise.validate();
    const NoiseSpec& noise = settings.noise;
    const double kappa_t = noise.kappa * control_time(settings.control);
    const bool ou = noise.ou.has_value();
    if (ou && opts.sampler == Sampler::Binomial) {
        throw PreconditionError("simulate_batch: OU drift needs per-shot sampling");
    }
    // Validate everything up front so worker threads only do arithmetic.
    const PhaseResponse response = phase_response(settings.signal, settings.control);
    double p_closed = 0.0;
    double dt = 0.0;
    if (opts.sampler == Sampler::Binomial) {
        p_closed = transition_probability(settings.signal, settings.control, noise);
    }
    if (ou) {
        dt = opts.ou_dt > 0.0 ? opts.ou_dt : default_ou_dt(settings.signal);
        if (std::holds_alternative<EffectiveProbe>(settings.control)) {
            throw PreconditionError("simulate_batch: OU drift needs a time-domain control");
        }
        if (dt > kTwoPi / settings.signal.omega_s() / 50.0) {
            throw InputError("simulate_batch: OU step dt exceeds a fiftieth of the signal period");
        }
    }

    const std::int64_t n_chunks = (n_shots + kChunkShots - 1) / kChunkShots;
    std::vector<std::int64_t> ones(static_cast<std::size_t>(n_chunks), 0);
    auto run_chunk = [&](std::int64_t c) {
        const std::int64_t size = std::min(kChunkShots, n_shots - c * kChunkShots);
        Rng rng(seed.child(static_cast<std::uint64_t>(c)));
        std::int64_t k = 0;
        if (opts.sampler == Sampler::Binomial) {
            k = rng.binomial(size, p_closed);
        } else if (ou) {
            for (std::int64_t i = 0; i < size; ++i) {
                const double phi = simulate_ou_shot(settings.signal, *noise.ou, settings.control, dt, rng);
                k += rng.bernoulli(shot_probability(phi, kappa_t, noise)) ? 1 : 0;
            }
        } else {
            for (std::int64_t i = 0; i < size; ++i) {
                const Quadratures q = draw_quadratures(settings.signal.amplitude(), rng);
                k += rng.bernoulli(shot_probability(response.phase(q), kappa_t, noise)) ? 1 : 0;
            }
        }
        ones[static_cast<std::size_t>(c)] = k;
    };

    parallel_for(n_chunks, opts.threads, run_chunk);

    ShotBatch out{n_shots, 0, settings};
    for (const auto k : ones) {
        out.n_ones += k;
    }
    return out;
}

OuProcess::OuProcess(OuParams p) : p_(p) {
    if (!(p.gamma > 0.0) || !(p.sigma_n >= 0.0)) {
        throw ValidationError("OU process needs gamma > 0 and sigma_n >= 0");
    }
}

double OuProcess::stationary_std() const noexcept { return p_.sigma_n / std::sqrt(2.0 * p_.gamma); }

double OuProcess::sample_stationary(Rng& rng) const { return stationary_std() * rng.normal(); }

double OuProcess::step(double x, double dt, Rng& rng) const {
    const double decay = std::exp(-p_.gamma * dt);
    const double spread = p_.sigma_n * std::sqrt(-std::expm1(-2.0 * p_.gamma * dt) / (2.0 * p_.gamma));
    return x * decay + spread * rng.normal();
}

double default_ou_dt(const TwoToneSignal& s) { return kTwoPi / s.omega_s() / 100.0; }

namespace {

struct Segment {
    double start;
    double length;
    int sign;
};

std::vector<Segment> segments_of(const Control& c) {
    if (const auto* f = std::get_if<FreeEvolution>(&c)) {
        if (!(f->t > 0.0)) {
            throw InputError("free evolution: t must be positive");
        }
        return {{0.0, f->t, 1}};
    }
    if (const auto* plan = std::get_if<PulsePlan>(&c)) {
        std::vector<Segment> segs;
        segs.reserve(static_cast<std::size_t>(plan->n_pulses()));
        for (std::int64_t k = 0; k < plan->n_pulses(); ++k) {
            segs.push_back({static_cast<double>(k) * plan->tau(), plan->tau(), k % 2 == 0 ? 1 : -1});
        }
        return segs;
    }
    throw PreconditionError("OU drift needs free evolution or an explicit pulse train");
}

OuPathEnd integrate_ou(const TwoToneSignal& s, const OuParams& ou, const Control& c, double dt, Rng& rng,
                       const Quadratures* start) {
    if (!(dt > 0.0) || dt > kTwoPi / s.omega_s() / 50.0) {
        throw InputError("OU step dt must be positive and at most a fiftieth of the signal period");
    }
    if (const auto* plan = std::get_if<PulsePlan>(&c)) {
        plan->check_spacing(s);
    }
    const OuProcess proc(ou);
    const auto w = s.tones();
    // x = (A1, B1, A2, B2)
    std::array<double, 4> x{};
    if (start != nullptr) {
        x = {start->a1, start->b1, start->a2, start->b2};
    } else {
        for (auto& v : x) {
            v = proc.sample_stationary(rng);
        }
    }
    double phase = 0.0;
    for (const Segment& seg : segments_of(c)) {
        const auto m = static_cast<std::int64_t>(std::ceil(seg.length / dt - 1e-9));
        const double h = seg.length / static_cast<double>(m);
        for (std::int64_t j = 0; j < m; ++j) {
            const double t0 = seg.start + static_cast<double>(j) * h;
            const double t1 = seg.start + static_cast<double>(j + 1) * h;
            std::array<double, 4> y{};
            for (int k = 0; k < 4; ++k) {
                y[k] = proc.step(x[k], h, rng);
            }
            double piece = 0.0;
            for (int i = 0; i < 2; ++i) {
                // Amplitudes linear in time, carrier integrated exactly.
                const std::complex<double> e0 = std::polar(1.0, w[i] * t0);
                const std::complex<double> e1 = std::polar(1.0, w[i] * t1);
                const std::complex<double> iw(0.0, w[i]);
                const std::complex<double> i0 = (e1 - e0) / iw;
                const std::complex<double> i1 = (h * e1 - i0) / iw;
                const double a0 = x[2 * i];
                const double b0 = x[2 * i + 1];
                const double da = (y[2 * i] - a0) / h;
                const double db = (y[2 * i + 1] - b0) / h;
                piece += std::real(a0 * i0 + da * i1) + std::imag(b0 * i0 + db * i1);
            }
            phase += seg.sign * piece;
            x = y;
        }
    }
    return {phase, {x[0], x[1], x[2], x[3]}};
}

}  // namespace

OuPathEnd simulate_ou_shot_with_end(const TwoToneSignal& s, const OuParams& ou, const Control& c, double dt, Rng& rng) {
    return integrate_ou(s, ou, c, dt, rng, nullptr);
}

double simulate_ou_shot(const TwoToneSignal& s, const OuParams& ou, const Control& c, double dt, Rng& rng) {
    return integrate_ou(s, ou, c, dt, rng, nullptr).phase;
}

double simulate_ou_shot_from(const TwoToneSignal& s, const OuParams& ou, const Control& c, double dt, Rng& rng,
                             const Quadratures& start) {
    return integrate_ou(s, ou, c, dt, rng, &start).phase;
}

std::vector<double> simulate_ou_phases(const TwoToneSignal& s, const OuParams& ou, const Control& c, std::int64_t n,
                                       RunSeed seed, double dt) {
    if (n < 1) {
        throw InputError("simulate_ou_phases: n must be at least 1");
    }
    const double step = dt > 0.0 ? dt : default_ou_dt(s);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        Rng rng(seed.child(static_cast<std::uint64_t>(k)));
        out[static_cast<std::size_t>(k)] = simulate_ou_shot(s, ou, c, step, rng);
    }
    return out;
}

}  // namespace superres
