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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "superres/errors.hpp"

namespace superres {
namespace {

using std::numbers::pi;
using testing::for_all;
using testing::Gen;

Quadratures random_quadratures(Gen& g) { return {g.normal(), g.normal(), g.normal(), g.normal()}; }

TEST(TwoToneSignal, EnforcesInvariants) {
    EXPECT_THROW(TwoToneSignal(0.0, 0.0, GaussianIID{1.0}), ValidationError);
    EXPECT_THROW(TwoToneSignal(1.0, 1.0, GaussianIID{1.0}), ValidationError);
    EXPECT_THROW(TwoToneSignal(1.0, 0.1, GaussianIID{-1.0}), ValidationError);
    const TwoToneSignal s(10.0, 0.5, FixedAmpUniformPhase{2.0});
    EXPECT_EQ(s.omega1(), 10.5);
    EXPECT_EQ(s.omega2(), 9.5);
    EXPECT_FALSE(s.is_gaussian());
    EXPECT_EQ(s.amplitude_parameter(), 2.0);
}

TEST(FreePhase, MatchesFrozenExample) {
    // q = (1, 0, -1, 0), omega_s t = 2 pi, omega_r t = 0.01.
    const TwoToneSignal s(2 * pi, 0.01, GaussianIID{1.0});
    const double phi = accumulated_phase_free({1.0, 0.0, -1.0, 0.0}, s, 1.0);
    EXPECT_NEAR(phi, 0.0031830538732251178363, 1e-15);
    EXPECT_NEAR(phi, 0.0031830988618379067154, 1e-7);  // first order in omega_r t
}

TEST(FreePhase, AgreesWithQuadrature) {
    for_all(30, 21, [](Gen& g) {
        const double ws = g.uniform(1.0, 20.0);
        const TwoToneSignal s(ws, g.uniform(0.0, 0.5) * ws, GaussianIID{1.0});
        const Quadratures q = random_quadratures(g);
        const double t = g.uniform(0.1, 3.0);
        EXPECT_NEAR(accumulated_phase_free(q, s, t), testing::integrated_phase(q, s, FreeEvolution{t}), 1e-9);
    });
}

TEST(PulsedPhase, AgreesWithSegmentQuadrature) {
    for_all(30, 22, [](Gen& g) {
        const double ws = g.uniform(5.0, 40.0);
        const TwoToneSignal s(ws, g.uniform(0.0, 0.05) * ws, GaussianIID{1.0});
        const auto n = static_cast<std::int64_t>(g.integer(4, 40));
        const PulsePlan plan = PulsePlan::for_detuning(ws, g.uniform(0.5, 7.0), n);
        try {
            plan.check_spacing(s);
        } catch (const SingularSpacingError&) {
            return;
        }
        const Quadratures q = random_quadratures(g);
        EXPECT_NEAR(accumulated_phase_pulsed(q, s, plan), testing::integrated_phase(q, s, plan), 1e-8);
        EXPECT_NEAR(phase_response(s, plan).phase(q), accumulated_phase_pulsed(q, s, plan), 1e-12);
    });
}

TEST(EffectivePhase, AgreesWithQuadrature) {
    for_all(30, 23, [](Gen& g) {
        const TwoToneSignal s(100.0, g.uniform(0.0, 2.0), GaussianIID{1.0});
        const EffectiveProbe probe{100.0 + g.uniform(-10.0, 10.0), g.uniform(0.2, 2.0),
                                   g.coin() ? Convention::Physical : Convention::Effective};
        const Quadratures q = random_quadratures(g);
        EXPECT_NEAR(phase_response(s, probe).phase(q), testing::integrated_phase(q, s, probe), 1e-9);
    });
}

TEST(PulsePlan, DetuningPhaseAndSigns) {
    const PulsePlan plan = PulsePlan::for_detuning(2000 * pi, 2 * pi, 2002);
    EXPECT_NEAR(plan.total_time(), 1.0, 1e-15);
    EXPECT_NEAR(plan.detuning_phase(2000 * pi), 2 * pi, 1e-9);
    EXPECT_EQ(plan.sign_at(0.5 * plan.tau()), 1);
    EXPECT_EQ(plan.sign_at(1.5 * plan.tau()), -1);
    EXPECT_THROW(PulsePlan(0.0, 3), ValidationError);
    EXPECT_THROW(PulsePlan(1.0, 0), ValidationError);
    EXPECT_THROW(PulsePlan::for_detuning(1.0, 10.0, 1), InputError);
}

TEST(PulsePlan, SingularSpacingDetected) {
    const PulsePlan plan(1.0, 4);
    EXPECT_THROW(plan.check_spacing(pi), SingularSpacingError);
    EXPECT_THROW(plan.check_spacing(3 * pi * (1 + 1e-8)), SingularSpacingError);
    EXPECT_NO_THROW(plan.check_spacing(2 * pi));
    EXPECT_NO_THROW(plan.check_spacing(pi * 1.01));
}

TEST(EffectivePrefactor, ApproachesTwoOverPi) {
    // delta / omega = 0.01 frozen at 40 digits.
    const double omega = 1.0;
    const double tau = pi / (omega * 1.01);
    EXPECT_NEAR(effective_prefactor(omega, tau), 0.64293412779235218903, 1e-13);
    const double tau_close = pi / (omega * (1 + 1e-5));
    EXPECT_NEAR(effective_prefactor(omega, tau_close), 2 / pi, 1e-4);
    EXPECT_THROW(effective_prefactor(pi, 1.0), SingularSpacingError);
    EXPECT_THROW(effective_prefactor(-1.0, 1.0), InputError);
}

TEST(PhaseResponse, ConjugationFlipsPhase) {
    for_all(20, 24, [](Gen& g) {
        const TwoToneSignal s(g.uniform(1, 10), 0.1, GaussianIID{1.0});
        const Quadratures q = random_quadratures(g);
        const Quadratures neg{-q.a1, -q.b1, -q.a2, -q.b2};
        const auto r = phase_response(s, FreeEvolution{g.uniform(0.1, 2)});
        EXPECT_DOUBLE_EQ(r.phase(neg), -r.phase(q));
    });
}

TEST(GradientSpan, RankFiveWithSeparationFourWithout) {
    std::vector<double> times(40);
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = 0.05 + 0.1 * static_cast<double>(i);
    }
    for_all(25, 25, [&](Gen& g) {
        SpanParams p;
        p.omega_s = g.uniform(1.0, 5.0);
        p.a = g.uniform(0.5, 2.0);
        p.b = g.uniform(0.5, 2.0);
        p.alpha = g.uniform(0.0, 2 * pi);
        p.beta = g.uniform(0.0, 2 * pi);
        p.omega_r = g.uniform(0.05, 0.5);
        EXPECT_EQ(gradient_span_rank(p, times), 5);
        p.omega_r = 0.0;
        EXPECT_EQ(gradient_span_rank(p, times), 4);
    });
    const std::vector<double> few{0.1, 0.2, 0.3};
    EXPECT_THROW(gradient_span_rank(SpanParams{}, few), InputError);
}

}  // namespace
}  // namespace superres
