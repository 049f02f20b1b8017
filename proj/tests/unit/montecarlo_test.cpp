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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "superres/errors.hpp"

namespace superres {
namespace {

using std::numbers::pi;
using testing::for_all;
using testing::Gen;

TEST(RunSeed, ChildrenAreDeterministicAndDistinct) {
    const RunSeed root{42, 0};
    EXPECT_EQ(root.child(3), root.child(3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        seen.insert(root.child(k).stream_index);
        seen.insert(root.child(k).child(1).stream_index);
    }
    EXPECT_EQ(seen.size(), 2000u);
    Rng a(root.child(7));
    Rng b(root.child(7));
    EXPECT_EQ(a.normal(), b.normal());
}

TEST(SimulateBatch, IndependentOfThreadCount) {
    const TwoToneSignal s(300.0, 0.05, GaussianIID{1.0});
    const BatchSettings set{s, EffectiveProbe{300.0 + 5.5, 1.0, Convention::Physical}, {}};
    const std::int64_t n = 3 * kChunkShots + 17;
    for (const Sampler sm : {Sampler::PerShot, Sampler::Binomial}) {
        const auto one = simulate_batch(set, n, {9, 0}, {1, sm, 0.0});
        const auto three = simulate_batch(set, n, {9, 0}, {3, sm, 0.0});
        EXPECT_EQ(one.n_ones, three.n_ones);
        EXPECT_EQ(one.n_shots, n);
        EXPECT_NE(one.n_ones, simulate_batch(set, n, {10, 0}, {1, sm, 0.0}).n_ones);
    }
}

TEST(SimulateBatch, EmpiricalMeanMatchesClosedForm) {
    // 20 points per amplitude model, 10^6 shots each, 4 binomial standard errors.
    for_all(40, 41, [](Gen& g) {
        const bool gaussian = g.coin();
        const double amp = g.uniform(0.2, 2.0);
        const AmplitudeModel model = gaussian ? AmplitudeModel{GaussianIID{amp}} : AmplitudeModel{FixedAmpUniformPhase{amp}};
        const TwoToneSignal s(200.0, g.uniform(0.01, 0.5), model);
        NoiseSpec noise;
        if (g.coin()) {
            noise.kappa = g.uniform(0.0, 0.2);
        }
        if (g.coin()) {
            noise.readout_eps = g.uniform(0.0, 0.1);
        }
        const BatchSettings set{s, EffectiveProbe{200.0 + g.uniform(3.0, 9.0), 1.0, Convention::Physical}, noise};
        const double p = transition_probability(set.signal, set.control, noise);
        const std::int64_t n = 1'000'000;
        const auto b = simulate_batch(set, n, {static_cast<std::uint64_t>(g.integer(0, 1 << 30)), 0});
        const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
        EXPECT_NEAR(b.frequency(), p, 4 * se + 1e-12);
    });
}

TEST(SimulateBatch, RejectsUnsupportedCombinations) {
    const TwoToneSignal s(2 * pi, 0.0, GaussianIID{0.0});
    NoiseSpec ou;
    ou.ou = OuParams{0.1, 0.3};
    EXPECT_THROW(simulate_batch({s, FreeEvolution{1.0}, ou}, 10, {1, 0}, {1, Sampler::Binomial, 0.0}), PreconditionError);
    EXPECT_THROW(simulate_batch({s, EffectiveProbe{10.0, 1.0}, ou}, 10, {1, 0}), PreconditionError);
    EXPECT_THROW(simulate_batch({s, FreeEvolution{1.0}, ou}, 10, {1, 0}, {1, Sampler::PerShot, 0.5}), InputError);
    EXPECT_THROW(simulate_batch({s, FreeEvolution{1.0}, {}}, 0, {1, 0}), InputError);
}

TEST(Quadratures, FixedAmplitudeHasConstantModulus) {
    Rng rng({5, 0});
    for (int i = 0; i < 100; ++i) {
        const Quadratures q = draw_quadratures(FixedAmpUniformPhase{1.7}, rng);
        EXPECT_NEAR(std::hypot(q.a1, q.b1), 1.7, 1e-14);
        EXPECT_NEAR(std::hypot(q.a2, q.b2), 1.7, 1e-14);
    }
}

TEST(ShotProbability, NoiseMaps) {
    EXPECT_NEAR(shot_probability(0.3, 0.0, {}), std::sin(0.3) * std::sin(0.3), 1e-15);
    EXPECT_NEAR(shot_probability(0.0, 0.1, {}), 0.5 * (1 - std::exp(-0.2)), 1e-15);
    NoiseSpec r;
    r.readout_eps = 0.1;
    EXPECT_NEAR(shot_probability(0.0, 0.0, r), 0.1, 1e-15);
}

TEST(OuProcess, ExactTransitionPreservesStationaryLaw) {
    const OuProcess proc({0.7, 0.4});
    Rng rng({11, 0});
    const int n = 200000;
    double m = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        // A single large step from a stationary draw must stay stationary.
        const double x = proc.step(proc.sample_stationary(rng), 3.0, rng);
        m += x;
        m2 += x * x;
    }
    m /= n;
    const double var = m2 / n - m * m;
    const double v0 = 0.4 * 0.4 / 1.4;
    EXPECT_NEAR(proc.stationary_std(), std::sqrt(v0), 1e-15);
    EXPECT_NEAR(m, 0.0, 4 * std::sqrt(v0 / n));
    EXPECT_NEAR(var, v0, 4 * v0 * std::sqrt(2.0 / n));
}

TEST(OuProcess, PhaseVarianceMatchesDoubleIntegral) {
    const TwoToneSignal s(2 * pi, 0.3, GaussianIID{0.0});
    const OuParams ou{0.5, 0.3};
    const double expected = testing::ou_phase_variance(s.omega1(), s.omega2(), ou.gamma, ou.sigma_n, 1.0);
    Rng rng({12, 0});
    const int n = 20000;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phi = simulate_ou_shot_from(s, ou, FreeEvolution{1.0}, default_ou_dt(s), rng, {});
        m2 += phi * phi;
    }
    EXPECT_NEAR(m2 / n, expected, 4 * expected * std::sqrt(2.0 / n));
}

TEST(OuProcess, PhasesDeterministicPerStream) {
    const TwoToneSignal s(2 * pi, 0.0, GaussianIID{0.0});
    const auto a = simulate_ou_phases(s, {0.1, 0.3}, FreeEvolution{1.0}, 8, {3, 0});
    const auto b = simulate_ou_phases(s, {0.1, 0.3}, FreeEvolution{1.0}, 8, {3, 0});
    EXPECT_EQ(a, b);
    EXPECT_THROW(simulate_ou_phases(s, {0.1, 0.3}, FreeEvolution{1.0}, 0, {3, 0}), InputError);
    EXPECT_THROW(simulate_ou_phases(s, {0.1, 0.3}, EffectiveProbe{1.0, 1.0}, 1, {3, 0}), PreconditionError);
}

}  // namespace
}  // namespace superres
