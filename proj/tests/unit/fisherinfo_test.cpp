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

#include "superres/fisherinfo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "superres/analytics.hpp"

namespace superres {
namespace {

using testing::for_all;
using testing::Gen;
using testing::CM;
using testing::diag_state;
using testing::random_family;
using testing::unitary_of;

TEST(DensityMatrix, RejectsBrokenInvariantsByName) {
    CM m(2, 2);
    m << 0.5, 0.1, 0.2, 0.5;
    try {
        DensityMatrix<double> d(m);
        FAIL() << "non-Hermitian matrix accepted";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("Hermitian"), std::string::npos);
    }
    m << 0.6, 0.0, 0.0, 0.5;
    EXPECT_THROW(DensityMatrix<double>{m}, ValidationError);
    m << 1.2, 0.0, 0.0, -0.2;
    try {
        DensityMatrix<double> d(m);
        FAIL() << "indefinite matrix accepted";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("positive semidefinite"), std::string::npos);
    }
    EXPECT_THROW(DensityMatrix<double>(CM(2, 3)), ValidationError);
}

TEST(DensityMatrix, SpectrumDescendingAndReconstructs) {
    for_all(30, 11, [](Gen& g) {
        const Eigen::Index dim = g.integer(2, 5);
        const CM v = g.unitary(dim);
        const CM rho = v * diag_state(g.spectrum(dim, g.integer(1, static_cast<int>(dim)))) * v.adjoint();
        const auto sd = spectral_decompose(DensityMatrix<double>(rho));
        for (Eigen::Index i = 1; i < dim; ++i) {
            EXPECT_GE(sd.eigenvalues(i - 1), sd.eigenvalues(i));
        }
        const CM back = sd.eigenvectors * sd.eigenvalues.cast<std::complex<double>>().asDiagonal() *
                        sd.eigenvectors.adjoint();
        EXPECT_LT((back - rho).cwiseAbs().maxCoeff(), 1e-12);
    });
}

TEST(Qfi, PureStateEqualsFourTimesGeneratorVariance) {
    // |psi(theta)> = exp(i theta H)|psi0>: F = 4 (<H^2> - <H>^2).
    for_all(25, 12, [](Gen& g) {
        const Eigen::Index dim = g.integer(2, 4);
        const CM h = g.hermitian(dim);
        Eigen::VectorXcd psi0 = g.complex_gaussian(dim, 1);
        psi0.normalize();
        auto eval = [=](const Eigen::VectorXd& th) {
            const Eigen::VectorXcd psi = unitary_of(h, th(0)) * psi0;
            return DensityMatrix<double>(psi * psi.adjoint());
        };
        const ParamDensityFamily<double> fam(eval, Eigen::VectorXd::Constant(1, 1e-5));
        const double mean = (psi0.adjoint() * h * psi0)(0, 0).real();
        const double sq = (psi0.adjoint() * h * h * psi0)(0, 0).real();
        const double expected = 4.0 * (sq - mean * mean);
        EXPECT_NEAR(qfi(fam, Eigen::VectorXd(Eigen::VectorXd::Constant(1, 0.3)), 0), expected, 1e-6 * std::max(1.0, expected));
    });
}

TEST(Qfi, MixedQubitMatchesBlochFormula) {
    // F = |r'|^2 + (r . r')^2 / (1 - |r|^2) for a qubit with Bloch vector r(theta).
    for_all(25, 13, [](Gen& g) {
        const double a = g.uniform(0.2, 0.9);
        const double b = g.uniform(-1.5, 1.5);
        const double c = g.uniform(0.05, 0.5);
        auto r = [=](double t) {
            const double len = a * (1.0 - c * t * t);
            return Eigen::Vector3d(len * std::cos(b * t), len * std::sin(b * t), 0.1 * t);
        };
        auto eval = [=](const Eigen::VectorXd& th) {
            const Eigen::Vector3d v = r(th(0));
            CM m(2, 2);
            m << 0.5 * (1 + v(2)), 0.5 * std::complex<double>(v(0), -v(1)), 0.5 * std::complex<double>(v(0), v(1)),
                0.5 * (1 - v(2));
            return DensityMatrix<double>(m);
        };
        const ParamDensityFamily<double> fam(eval, Eigen::VectorXd::Constant(1, 1e-5));
        const double t = g.uniform(-0.5, 0.5);
        const double h = 1e-6;
        const Eigen::Vector3d rv = r(t);
        const Eigen::Vector3d dr = (r(t + h) - r(t - h)) / (2 * h);
        const double expected = dr.squaredNorm() + std::pow(rv.dot(dr), 2) / (1.0 - rv.squaredNorm());
        EXPECT_NEAR(qfi(fam, Eigen::VectorXd(Eigen::VectorXd::Constant(1, t)), 0), expected, 1e-6 * expected);
    });
}

TEST(Qfi, SandwichedBySquareRootDerivative) {
    for_all(100, 14, [](Gen& g) {
        const Eigen::Index dim = g.integer(2, 4);
        const auto fam = random_family(g, dim, dim);
        const Eigen::VectorXd th = Eigen::VectorXd::Zero(1);
        const double f = qfi(fam, th, 0);
        const double tr = sqrt_rho_deriv_trace(fam, th, 0);
        EXPECT_LE(2.0 * tr, f * (1 + 1e-6));
        EXPECT_LE(f, 4.0 * tr * (1 + 1e-6));
    });
}

TEST(Qfi, CommutingFamilySaturatesUpperBound) {
    auto eval = [](const Eigen::VectorXd& th) {
        Eigen::VectorXd p(3);
        p << 0.5 + 0.2 * th(0), 0.3 - 0.1 * th(0), 0.2 - 0.1 * th(0);
        return DensityMatrix<double>(diag_state(p));
    };
    const ParamDensityFamily<double> fam(eval, Eigen::VectorXd::Constant(1, 1e-5));
    const Eigen::VectorXd th = Eigen::VectorXd::Zero(1);
    const double classical = 0.04 / 0.5 + 0.01 / 0.3 + 0.01 / 0.2;
    EXPECT_NEAR(qfi(fam, th, 0), classical, 1e-9);
    EXPECT_NEAR(4.0 * sqrt_rho_deriv_trace(fam, th, 0), classical, 1e-8);
}

TEST(FisherMatrix, ClassicalBelowQuantumAndBothPsd) {
    for_all(40, 15, [](Gen& g) {
        const Eigen::Index dim = g.integer(2, 4);
        const CM h1 = g.hermitian(dim);
        const CM h2 = g.hermitian(dim);
        const Eigen::VectorXd p0 = g.spectrum(dim, g.integer(1, static_cast<int>(dim)));
        auto eval = [=](const Eigen::VectorXd& th) {
            const CM u = unitary_of(h1, th(0)) * unitary_of(h2, th(1));
            return DensityMatrix<double>(u * diag_state(p0) * u.adjoint());
        };
        const ParamDensityFamily<double> fam(eval, Eigen::VectorXd::Constant(2, 1e-5));
        const Eigen::VectorXd th(Eigen::Vector2d(g.uniform(-1, 1), g.uniform(-1, 1)));
        const auto fq = qfi_matrix(fam, th);
        const auto fc = classical_fi_matrix(fam, th);
        EXPECT_GE(fq.min_eigenvalue(), -1e-8);
        EXPECT_GE(fc.min_eigenvalue(), -1e-8);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gap(fq.entries() - fc.entries());
        EXPECT_GE(gap.eigenvalues().minCoeff(), -1e-6 * std::max(1.0, fq.entries().maxCoeff()));
        EXPECT_NEAR(fq(0, 0), qfi(fam, th, 0), 1e-12 * std::max(1.0, fq(0, 0)));
    });
}

TEST(FisherMatrix, RejectsAsymmetricEntries) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.5, 0.4, 1.0;
    EXPECT_THROW(FisherMatrix<double>{m}, ValidationError);
    m << 1.0, 0.0, 0.0, -1.0;
    EXPECT_THROW(FisherMatrix<double>{m}, ValidationError);
}

TEST(Family, ChecksDomainAndIndex) {
    auto eval = [](const Eigen::VectorXd&) { return DensityMatrix<double>(CM::Identity(2, 2) * 0.5); };
    const ParamDensityFamily<double> fam(eval, Eigen::VectorXd::Constant(1, 1e-5),
                                         [](const Eigen::VectorXd& th) { return th(0) >= 0.0; });
    EXPECT_THROW(fam.at(Eigen::VectorXd::Constant(1, -1.0)), DomainError);
    EXPECT_THROW(fam.at(Eigen::VectorXd::Zero(2)), InputError);
    EXPECT_THROW(fam.derivative(Eigen::VectorXd::Constant(1, 1.0), 3), InputError);
    EXPECT_THROW(ParamDensityFamily<double>(eval, Eigen::VectorXd::Constant(1, 0.0)), ValidationError);
}

TEST(Criterion, RamseyResolvesOnlyAtResonance) {
    const auto grid = log_spaced(1e-4, 1e-2, 9);
    const auto on = superres_criterion<double>(ramsey_family(2 * std::numbers::pi, 1.0, Convention::Physical, 1e-7),
                                               Eigen::VectorXd::Zero(1), 0, grid);
    EXPECT_NEAR(on.exponent_k, 2.0, 0.05);
    EXPECT_TRUE(on.verdict);
    EXPECT_NEAR(on.limit_fi, 8.0 / std::pow(std::numbers::pi, 4), 1e-3);
    const auto off = superres_criterion<double>(
        ramsey_family(1.8 * std::numbers::pi, 1.0, Convention::Physical, 1e-7), Eigen::VectorXd::Zero(1), 0, grid);
    EXPECT_FALSE(off.verdict);
    EXPECT_LT(off.limit_fi, 1e-8);
}

TEST(Criterion, QuarticEigenvalueHasNoLimitInformation) {
    auto eval = [](const Eigen::VectorXd& th) {
        const double q = std::pow(th(0), 4);
        Eigen::Vector2d p(1.0 - q, q);
        return DensityMatrix<double>(diag_state(p));
    };
    const ParamDensityFamily<double> fam(eval, Eigen::VectorXd::Constant(1, 1e-6));
    const auto r = superres_criterion<double>(fam, Eigen::VectorXd::Zero(1), 0, log_spaced(1e-3, 1e-1, 7));
    EXPECT_NEAR(r.exponent_k, 4.0, 0.01);
    EXPECT_FALSE(r.verdict);
}

TEST(Criterion, RejectsAsymmetricFamiliesAndBadGrids) {
    auto eval = [](const Eigen::VectorXd& th) {
        const double q = 0.1 + 0.05 * th(0);
        return DensityMatrix<double>(diag_state(Eigen::Vector2d(1.0 - q, q)));
    };
    const ParamDensityFamily<double> fam(eval, Eigen::VectorXd::Constant(1, 1e-6));
    EXPECT_THROW(superres_criterion<double>(fam, Eigen::VectorXd::Zero(1), 0, log_spaced(1e-3, 1e-1, 5)),
                 PreconditionError);
    const std::vector<double> linear{0.1, 0.2, 0.3, 0.4};
    EXPECT_THROW(superres_criterion<double>(fam, Eigen::VectorXd::Zero(1), 0, linear), InputError);
    const std::vector<double> short_grid{0.1, 0.2};
    EXPECT_THROW(superres_criterion<double>(fam, Eigen::VectorXd::Zero(1), 0, short_grid), InputError);
}

TEST(Multivariate, BlockTestAgreesWithFullMatrix) {
    // Regular: a rotation angle plus a separation whose eigenvalue grows as s^2.
    const CM h = Gen(3).hermitian(2);
    auto regular = [h](const Eigen::VectorXd& th) {
        const double q = th(1) * th(1) / 4.0;
        const CM u = unitary_of(h, th(0));
        return DensityMatrix<double>(u * diag_state(Eigen::Vector2d(1.0 - q, q)) * u.adjoint());
    };
    const ParamDensityFamily<double> reg(regular, Eigen::VectorXd::Constant(2, 1e-9));
    const std::vector<Index> prob{1};
    const auto r1 = multivariate_criterion<double>(reg, Eigen::Vector2d(0.2, 1e-6), prob);
    EXPECT_TRUE(r1.regular);
    EXPECT_TRUE(r1.consistent());

    // Singular: two labels for the same separation.
    auto twin = [](const Eigen::VectorXd& th) {
        const double s = th(0) + th(1);
        const double q = s * s / 4.0;
        return DensityMatrix<double>(diag_state(Eigen::Vector2d(1.0 - q, q)));
    };
    const ParamDensityFamily<double> sing(twin, Eigen::VectorXd::Constant(2, 1e-9));
    const std::vector<Index> both{0, 1};
    const auto r2 = multivariate_criterion<double>(sing, Eigen::Vector2d(1.5e-7, 1.5e-7), both);
    EXPECT_FALSE(r2.regular);
    EXPECT_TRUE(r2.consistent());

    const std::vector<Index> rot{0};
    EXPECT_THROW(multivariate_criterion<double>(reg, Eigen::Vector2d(0.2, 1e-6), rot), PreconditionError);
}

TEST(Multivariate, BlockVerdictMatchesShapeOnRandomFamilies) {
    for_all(60, 19, [](Gen& g) {
        const auto shape = static_cast<testing::SeparationShape>(g.integer(0, 2));
        const auto fam = testing::random_separation_family(g, g.integer(2, 4), shape);
        const bool twin = shape == testing::SeparationShape::Twin;
        const std::vector<Index> prob = twin ? std::vector<Index>{0, 1} : std::vector<Index>{1};
        const Eigen::Vector2d th = twin ? Eigen::Vector2d(1.5e-7, 1.5e-7) : Eigen::Vector2d(g.uniform(-1, 1), 3e-7);
        const auto r = multivariate_criterion<double>(fam, th, prob);
        EXPECT_EQ(r.regular, shape == testing::SeparationShape::Quadratic);
        EXPECT_TRUE(r.consistent());
    });
}

TEST(LogSpaced, EndpointsExactAndRatiosEqual) {
    const auto g = log_spaced(1e-4, 1e-2, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front(), 1e-4);
    EXPECT_EQ(g.back(), 1e-2);
    EXPECT_NEAR(g[1] / g[0], g[3] / g[2], 1e-12);
}

}  // namespace
}  // namespace superres
