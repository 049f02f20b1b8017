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

#ifndef SUPERRES_FISHERINFO_HPP
#define SUPERRES_FISHERINFO_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "superres/errors.hpp"
#include "superres/types.hpp"

namespace superres {

namespace fisher_tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPsd = -1e-10;
/// Pairs with p_i + p_j below this are excluded from every 1/p sum.
inline constexpr double kEigenFloor = 1e-14;
inline constexpr double kFisherSymmetric = 1e-10;
inline constexpr double kFisherPsd = -1e-8;
inline constexpr double kRegular = 1e-8;
inline constexpr double kCriterionSymmetry = 1e-9;
inline constexpr double kVanishingDerivative = 1e-6;
inline constexpr double kExponentTol = 0.05;
inline constexpr double kDefaultStep = 1e-5;
}  // namespace fisher_tol

/// Finite-dimensional quantum state. Construction enforces Hermiticity, unit
/// trace and positivity; the stored matrix is the exact Hermitian part.
template <typename Real = double>
class DensityMatrix {
   public:
    using Matrix = ComplexMatrix<Real>;

    explicit DensityMatrix(Matrix elements) {
        if (elements.rows() == 0 || elements.rows() != elements.cols()) {
            throw ValidationError("density matrix: elements must form a nonempty square matrix");
        }
        Real herm = 0;
        for (Index i = 0; i < elements.rows(); ++i) {
            for (Index j = 0; j < elements.cols(); ++j) {
                herm = std::max(herm, std::abs(elements(i, j) - std::conj(elements(j, i))));
            }
        }
        if (!(herm <= Real(fisher_tol::kHermitian))) {
            throw ValidationError(describe("Hermitian", "max |rho_ij - conj(rho_ji)|", herm));
        }
        Matrix h = (elements + elements.adjoint()) / Real(2);
        const Real tr_err = std::abs(h.trace().real() - Real(1));
        if (!(tr_err <= Real(fisher_tol::kTrace))) {
            throw ValidationError(describe("unit trace", "|tr rho - 1|", tr_err));
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        const Real min_eig = es.eigenvalues().minCoeff();
        if (!(min_eig >= Real(fisher_tol::kPsd))) {
            throw ValidationError(describe("positive semidefinite", "min eigenvalue", min_eig));
        }
        rho_ = std::move(h);
    }

    const Matrix& elements() const noexcept { return rho_; }
    Index dim() const noexcept { return rho_.rows(); }

   private:
    static std::string describe(const char* invariant, const char* quantity, Real value) {
        std::ostringstream os;
        os << "density matrix invariant '" << invariant << "' violated: " << quantity << " = "
           << static_cast<double>(value);
        return os.str();
    }

    Matrix rho_;
};

template <typename Real = double>
struct SpectralDecomposition {
    RealVector<Real> eigenvalues;   // descending, clipped to [0, 1]
    ComplexMatrix<Real> eigenvectors;  // columns match eigenvalues
};

template <typename Real>
SpectralDecomposition<Real> spectral_decompose(const DensityMatrix<Real>& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(rho.elements());
    const Index n = rho.dim();
    SpectralDecomposition<Real> out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Index j = 0; j < n; ++j) {
        const Index src = n - 1 - j;
        out.eigenvalues(j) = std::clamp(es.eigenvalues()(src), Real(0), Real(1));
        out.eigenvectors.col(j) = es.eigenvectors().col(src);
    }
    return out;
}

/// Raw-matrix overload: validates before decomposing.
template <typename Real>
SpectralDecomposition<Real> spectral_decompose(const ComplexMatrix<Real>& elements) {
    return spectral_decompose(DensityMatrix<Real>(elements));
}

/// Symmetric PSD matrix of Fisher information entries.
template <typename Real = double>
class FisherMatrix {
   public:
    explicit FisherMatrix(RealMatrix<Real> entries) {
        if (entries.rows() != entries.cols()) {
            throw ValidationError("fisher matrix: entries must be square");
        }
        const Real asym = entries.rows() == 0 ? Real(0) : (entries - entries.transpose()).cwiseAbs().maxCoeff();
        if (!(asym <= Real(fisher_tol::kFisherSymmetric))) {
            throw ValidationError("fisher matrix invariant 'symmetric' violated");
        }
        entries_ = (entries + entries.transpose()) / Real(2);
        if (entries_.rows() > 0) {
            const Real scale = std::max(Real(1), entries_.cwiseAbs().maxCoeff());
            if (!(min_eigenvalue() >= Real(fisher_tol::kFisherPsd) * scale)) {
                throw ValidationError("fisher matrix invariant 'positive semidefinite' violated");
            }
        }
    }

    Index size() const noexcept { return entries_.rows(); }
    Real operator()(Index i, Index j) const { return entries_(i, j); }
    const RealMatrix<Real>& entries() const noexcept { return entries_; }

    Real min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<RealMatrix<Real>> es(entries_, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }

    /// Principal submatrix on the given indices.
    FisherMatrix block(std::span<const Index> idx) const {
        RealMatrix<Real> b(idx.size(), idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                b(i, j) = entries_(idx[i], idx[j]);
            }
        }
        return FisherMatrix(std::move(b));
    }

   private:
    RealMatrix<Real> entries_;
};

/// A map theta -> rho(theta) together with its finite-difference step policy.
template <typename Real = double>
class ParamDensityFamily {
   public:
    using Theta = RealVector<Real>;
    using Evaluator = std::function<DensityMatrix<Real>(const Theta&)>;
    using Domain = std::function<bool(const Theta&)>;

    ParamDensityFamily(Evaluator evaluate, Theta fd_step, Domain in_domain = {})
        : evaluate_(std::move(evaluate)), fd_step_(std::move(fd_step)), in_domain_(std::move(in_domain)) {
        if (!evaluate_) {
            throw InputError("family: evaluator is empty");
        }
        if (fd_step_.size() == 0) {
            throw InputError("family: at least one parameter is required");
        }
        for (Index k = 0; k < fd_step_.size(); ++k) {
            if (!(fd_step_(k) > Real(0))) {
                throw ValidationError("family invariant 'fd_step > 0' violated for parameter " + std::to_string(k));
            }
        }
    }

    Index n_params() const noexcept { return fd_step_.size(); }
    const Theta& fd_step() const noexcept { return fd_step_; }

    ParamDensityFamily with_fd_step(Theta step) const { return ParamDensityFamily(evaluate_, std::move(step), in_domain_); }

    DensityMatrix<Real> at(const Theta& theta) const {
        check_theta(theta);
        return evaluate_(theta);
    }

    /// Central difference of rho along parameter idx.
    ComplexMatrix<Real> derivative(const Theta& theta, Index idx) const {
        check_index(idx);
        const Real h = fd_step_(idx);
        Theta up = theta;
        Theta dn = theta;
        up(idx) += h;
        dn(idx) -= h;
        return (at(up).elements() - at(dn).elements()) / (Real(2) * h);
    }

    void check_index(Index idx) const {
        if (idx < 0 || idx >= n_params()) {
            throw InputError("family: parameter index " + std::to_string(idx) + " out of range");
        }
    }

   private:
    void check_theta(const Theta& theta) const {
        if (theta.size() != n_params()) {
            throw InputError("family: theta has " + std::to_string(theta.size()) + " entries, expected " +
                             std::to_string(n_params()));
        }
        if (in_domain_ && !in_domain_(theta)) {
            throw DomainError("family: theta outside the declared domain");
        }
    }

    Evaluator evaluate_;
    Theta fd_step_;
    Domain in_domain_;
};

namespace detail {

template <typename Real>
std::vector<ComplexMatrix<Real>> rotated_derivatives(const ParamDensityFamily<Real>& family,
                                                     const RealVector<Real>& theta,
                                                     const ComplexMatrix<Real>& basis) {
    std::vector<ComplexMatrix<Real>> out;
    out.reserve(family.n_params());
    for (Index k = 0; k < family.n_params(); ++k) {
        out.push_back(basis.adjoint() * family.derivative(theta, k) * basis);
    }
    return out;
}

// 2 sum_ij Re(Dk_ij conj(Dl_ij)) / (p_i + p_j). Written without splitting into
// eigenvalue and eigenvector parts, so degenerate subspaces need no gauge choice.
template <typename Real>
Real sld_pair(const ComplexMatrix<Real>& dk, const ComplexMatrix<Real>& dl, const RealVector<Real>& p) {
    Real acc = 0;
    const Index n = p.size();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const Real s = p(i) + p(j);
            if (s < Real(fisher_tol::kEigenFloor)) {
                continue;
            }
            acc += std::real(dk(i, j) * std::conj(dl(i, j))) / s;
        }
    }
    return Real(2) * acc;
}

template <typename Real>
ComplexMatrix<Real> sqrt_psd(const DensityMatrix<Real>& rho) {
    const auto sd = spectral_decompose(rho);
    RealVector<Real> r(sd.eigenvalues.size());
    for (Index j = 0; j < r.size(); ++j) {
        const Real p = sd.eigenvalues(j);
        r(j) = p < Real(fisher_tol::kEigenFloor) ? Real(0) : std::sqrt(p);
    }
    return sd.eigenvectors * r.asDiagonal() * sd.eigenvectors.adjoint();
}

}  // namespace detail

/// Quantum Fisher information about theta[idx].
template <typename Real>
Real qfi(const ParamDensityFamily<Real>& family, const RealVector<Real>& theta, Index idx) {
    family.check_index(idx);
    const auto sd = spectral_decompose(family.at(theta));
    const ComplexMatrix<Real> d = sd.eigenvectors.adjoint() * family.derivative(theta, idx) * sd.eigenvectors;
    return std::max(Real(0), detail::sld_pair(d, d, sd.eigenvalues));
}

template <typename Real>
FisherMatrix<Real> qfi_matrix(const ParamDensityFamily<Real>& family, const RealVector<Real>& theta) {
    const auto sd = spectral_decompose(family.at(theta));
    const auto ds = detail::rotated_derivatives(family, theta, sd.eigenvectors);
    const Index n = family.n_params();
    RealMatrix<Real> f(n, n);
    for (Index k = 0; k < n; ++k) {
        for (Index l = k; l < n; ++l) {
            f(k, l) = f(l, k) = detail::sld_pair(ds[k], ds[l], sd.eigenvalues);
        }
    }
    return FisherMatrix<Real>(std::move(f));
}

/// Fisher information of a projective measurement in the eigenbasis of rho(theta).
template <typename Real>
FisherMatrix<Real> classical_fi_matrix(const ParamDensityFamily<Real>& family, const RealVector<Real>& theta) {
    const auto sd = spectral_decompose(family.at(theta));
    const auto ds = detail::rotated_derivatives(family, theta, sd.eigenvectors);
    const Index n = family.n_params();
    RealMatrix<Real> c = RealMatrix<Real>::Zero(n, n);
    for (Index j = 0; j < sd.eigenvalues.size(); ++j) {
        const Real p = sd.eigenvalues(j);
        if (p <= Real(fisher_tol::kEigenFloor)) {
            continue;
        }
        for (Index k = 0; k < n; ++k) {
            for (Index l = k; l < n; ++l) {
                const Real v = std::real(ds[k](j, j)) * std::real(ds[l](j, j)) / p;
                c(k, l) += v;
                if (l != k) {
                    c(l, k) += v;
                }
            }
        }
    }
    return FisherMatrix<Real>(std::move(c));
}

/// tr[(d sqrt(rho)/d theta_idx)^2].
template <typename Real>
Real sqrt_rho_deriv_trace(const ParamDensityFamily<Real>& family, const RealVector<Real>& theta, Index idx) {
    family.check_index(idx);
    const Real h = family.fd_step()(idx);
    RealVector<Real> up = theta;
    RealVector<Real> dn = theta;
    up(idx) += h;
    dn(idx) -= h;
    (void)family.at(theta);
    const ComplexMatrix<Real> ds =
        (detail::sqrt_psd(family.at(up)) - detail::sqrt_psd(family.at(dn))) / (Real(2) * h);
    return std::max(Real(0), (ds * ds).trace().real());
}

template <typename Real = double>
struct CriterionResult {
    Real exponent_k = std::numeric_limits<Real>::quiet_NaN();
    bool exponent_defined = false;
    Real limit_fi = 0;
    bool verdict = false;
    Index eigen_index = -1;  // which eigenvalue the exponent refers to
};

/// Geometric grid with n points from lo to hi inclusive.
template <typename Real = double>
std::vector<Real> log_spaced(Real lo, Real hi, std::size_t n) {
    if (!(lo > 0) || !(hi > lo) || n < 2) {
        throw InputError("log_spaced: need 0 < lo < hi and at least two points");
    }
    std::vector<Real> g(n);
    const Real step = std::log(hi / lo) / Real(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo * std::exp(step * Real(i));
    }
    g.back() = hi;
    return g;
}

/// Eigenvalue-scaling test for resolving a symmetric separation parameter.
/// The FI limit is the qfi at the smallest grid point, extrapolated log-log
/// through the two smallest points down to s_min / 100.
template <typename Real>
CriterionResult<Real> superres_criterion(const ParamDensityFamily<Real>& family, const RealVector<Real>& base,
                                         Index sep_idx, std::span<const Real> grid) {
    family.check_index(sep_idx);
    if (grid.size() < 3) {
        throw InputError("criterion: grid needs at least three separations");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw InputError("criterion: grid must be strictly positive and increasing");
        }
    }
    const Real ratio = std::log(grid[1] / grid[0]);
    for (std::size_t i = 2; i < grid.size(); ++i) {
        if (std::abs(std::log(grid[i] / grid[i - 1]) - ratio) > Real(1e-6) * std::abs(ratio)) {
            throw InputError("criterion: grid must be log-spaced");
        }
    }

    auto at_sep = [&](Real s) {
        RealVector<Real> th = base;
        th(sep_idx) = s;
        return th;
    };
    const Index dim = family.at(at_sep(Real(0))).dim();
    const RealVector<Real> p0 = spectral_decompose(family.at(at_sep(Real(0)))).eigenvalues;
    RealMatrix<Real> change(dim, grid.size());
    std::vector<RealVector<Real>> spectra;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto plus = family.at(at_sep(grid[i]));
        const auto minus = family.at(at_sep(-grid[i]));
        const Real asym = (plus.elements() - minus.elements()).cwiseAbs().maxCoeff();
        if (!(asym <= Real(fisher_tol::kCriterionSymmetry))) {
            std::ostringstream os;
            os << "criterion: family not symmetric in parameter " << sep_idx << " at s = "
               << static_cast<double>(grid[i]) << " (max |rho(s) - rho(-s)| = " << static_cast<double>(asym) << ")";
            throw PreconditionError(os.str());
        }
        spectra.push_back(spectral_decompose(plus).eigenvalues);
        change.col(i) = (spectra.back() - p0).cwiseAbs();
    }

    CriterionResult<Real> out;
    // Eigenvalue changes below this are rounding noise of the eigensolver.
    const Real noise = Real(1e-13);
    Index pick = -1;
    for (Index j = 0; j < dim; ++j) {
        if (change.row(j).maxCoeff() <= noise) {
            continue;
        }
        if (pick < 0 || spectra.front()(j) < spectra.front()(pick)) {
            pick = j;
        }
    }
    if (pick < 0) {
        return out;
    }
    out.eigen_index = pick;

    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Real c = change(pick, i);
        if (!(c > 0)) {
            continue;
        }
        const Real x = std::log(grid[i]);
        const Real y = std::log(c);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used >= 2) {
        const Real nn = Real(used);
        out.exponent_k = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        out.exponent_defined = true;
    }

    const Real f1 = qfi(family, at_sep(grid[0]), sep_idx);
    const Real f2 = qfi(family, at_sep(grid[1]), sep_idx);
    if (f1 > 0 && f2 > 0) {
        const Real m = std::log(f2 / f1) / std::log(grid[1] / grid[0]);
        out.limit_fi = f1 * std::pow(Real(100), -m);
    }
    const Real tol = Real(fisher_tol::kExponentTol);
    out.verdict = out.exponent_defined && out.exponent_k > Real(1) - tol && out.exponent_k <= Real(2) + tol &&
                  out.limit_fi > Real(fisher_tol::kRegular);
    return out;
}

template <typename Real = double>
struct MultivariateResult {
    bool regular = false;     // from the problematic block of the classical FI
    Real c22_min_eig = 0;
    bool full_regular = false;  // from the complete QFI matrix
    Real full_min_eig = 0;
    bool consistent() const noexcept { return regular == full_regular; }
};

/// Regularity of the QFI matrix decided from the eigenvalue-only block of the
/// parameters whose state derivative vanishes, cross-checked on the full matrix.
template <typename Real>
MultivariateResult<Real> multivariate_criterion(const ParamDensityFamily<Real>& family, const RealVector<Real>& theta,
                                                std::span<const Index> problematic) {
    if (problematic.empty()) {
        throw InputError("multivariate criterion: no problematic parameters given");
    }
    for (const Index i : problematic) {
        const Real norm = family.derivative(theta, i).cwiseAbs().maxCoeff();
        if (!(norm <= Real(fisher_tol::kVanishingDerivative))) {
            std::ostringstream os;
            os << "multivariate criterion: d rho / d theta_" << i << " does not vanish (max entry "
               << static_cast<double>(norm) << ")";
            throw PreconditionError(os.str());
        }
    }
    MultivariateResult<Real> out;
    out.c22_min_eig = classical_fi_matrix(family, theta).block(problematic).min_eigenvalue();
    out.regular = out.c22_min_eig > Real(fisher_tol::kRegular);
    out.full_min_eig = qfi_matrix(family, theta).min_eigenvalue();
    out.full_regular = out.full_min_eig > Real(fisher_tol::kRegular);
    return out;
}

extern template class DensityMatrix<double>;
extern template class FisherMatrix<double>;
extern template class ParamDensityFamily<double>;

}  // namespace superres

#endif
