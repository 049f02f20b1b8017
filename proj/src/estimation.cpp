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

#include "superres/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "superres/errors.hpp"
#include "superres/fisherinfo.hpp"
#include "superres/optimize.hpp"
#include "superres/parallel.hpp"

namespace superres {

namespace {

constexpr double kClamp = 1e-12;
constexpr int kCoarseGrid = 512;

double clamp_prob(double p) { return std::clamp(p, kClamp, 1.0 - kClamp); }

double sigma_of(const TwoToneSignal& s) {
    if (!s.is_gaussian()) {
        throw InputError("estimation protocols assume the Gaussian amplitude model");
    }
    return s.amplitude_parameter();
}

// Nelder-Mead on the unit cube mapped onto the model box; out-of-box points
// are projected, which keeps the simplex free to move along the boundary.
VectorOptimum box_minimize(const std::function<double(const Eigen::VectorXd&)>& neg_ll, const LikelihoodModel& model,
                           std::span<const Eigen::VectorXd> starts) {
    const Eigen::VectorXd span = model.upper - model.lower;
    auto to_theta = [&](const Eigen::VectorXd& u) {
        return Eigen::VectorXd(model.lower + span.cwiseProduct(u.cwiseMax(0.0).cwiseMin(1.0)));
    };
    auto objective = [&](const Eigen::VectorXd& u) { return neg_ll(to_theta(u)); };
    NelderMeadOptions opts;
    opts.x_tol = 1e-11;
    opts.f_tol = 1e-14;
    opts.max_evals = 4000;
    VectorOptimum best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        Eigen::VectorXd u0 = (start - model.lower).cwiseQuotient(span).cwiseMax(0.0).cwiseMin(1.0);
        VectorOptimum o = nelder_mead_minimize(objective, u0, Eigen::VectorXd::Constant(u0.size(), 0.08), opts);
        // Restart once from the optimum: a collapsed simplex can stall early.
        o = nelder_mead_minimize(objective, o.x.cwiseMax(0.0).cwiseMin(1.0), Eigen::VectorXd::Constant(u0.size(), 0.005),
                                 opts);
        if (o.value < best.value) {
            best = o;
        }
    }
    best.x = to_theta(best.x);
    return best;
}

Eigen::VectorXd std_errors(const Eigen::MatrixXd& info) {
    const Eigen::Index n = info.rows();
    Eigen::VectorXd se = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
    if (es.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff())) {
        const Eigen::MatrixXd inv = info.inverse();
        for (Eigen::Index i = 0; i < n; ++i) {
            se(i) = std::sqrt(std::max(0.0, inv(i, i)));
        }
    }
    return se;
}

bool near_bound(const LikelihoodModel& m, const Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double tol = 1e-6 * (m.upper(i) - m.lower(i));
        if (x(i) - m.lower(i) <= tol || m.upper(i) - x(i) <= tol) {
            return true;
        }
    }
    return false;
}

}  // namespace

void LikelihoodModel::validate() const {
    const auto n = static_cast<std::size_t>(lower.size());
    if (n == 0 || upper.size() != lower.size() || names.size() != n) {
        throw InputError("likelihood model: names and bounds must have one entry per parameter");
    }
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!(upper(i) > lower(i))) {
            throw InputError("likelihood model: empty interval for " + names[static_cast<std::size_t>(i)]);
        }
    }
    if (!probability) {
        throw InputError("likelihood model: probability map is empty");
    }
}

Eigen::VectorXd LikelihoodModel::clamp(const Eigen::VectorXd& theta) const {
    return theta.cwiseMax(lower).cwiseMin(upper);
}

LikelihoodModel omega_r_model(double omega_s, double sigma, double lo, double hi) {
    if (!(lo >= 0.0)) {
        throw InputError("omega_r bounds: lower bound must be >= 0 (only |omega_r| is identifiable)");
    }
    if (!(hi > lo) || !(hi < omega_s)) {
        throw InputError("omega_r bounds: need lo < hi < omega_s");
    }
    LikelihoodModel m;
    m.names = {"omega_r"};
    m.lower = Eigen::VectorXd::Constant(1, lo);
    m.upper = Eigen::VectorXd::Constant(1, hi);
    m.probability = [omega_s, sigma](const Eigen::VectorXd& th, const BatchSettings& known) {
        const TwoToneSignal s(omega_s, std::abs(th(0)), GaussianIID{sigma});
        return transition_probability(s, known.control, known.noise);
    };
    return m;
}

LikelihoodModel joint_model(const Eigen::Vector3d& lower, const Eigen::Vector3d& upper) {
    if (!(lower(0) >= 0.0) || !(lower(1) > 0.0) || !(lower(2) > 0.0)) {
        throw InputError("joint model: need omega_r >= 0, omega_s > 0, sigma > 0 on the whole box");
    }
    LikelihoodModel m;
    m.names = {"omega_r", "omega_s", "sigma"};
    m.lower = lower;
    m.upper = upper;
    m.probability = [](const Eigen::VectorXd& th, const BatchSettings& known) {
        const TwoToneSignal s(th(1), std::abs(th(0)), GaussianIID{std::abs(th(2))});
        return transition_probability(s, known.control, known.noise);
    };
    m.validate();
    return m;
}

double log_likelihood(std::span<const ShotBatch> batches, const LikelihoodModel& model, const Eigen::VectorXd& theta) {
    if (batches.empty()) {
        throw InputError("log_likelihood: no batches");
    }
    if (theta.size() != model.size()) {
        throw InputError("log_likelihood: theta has the wrong number of entries");
    }
    double ll = 0.0;
    for (const auto& b : batches) {
        const double p = clamp_prob(model.probability(theta, b.settings));
        const auto ones = static_cast<double>(b.n_ones);
        const auto zeros = static_cast<double>(b.n_shots - b.n_ones);
        ll += ones * std::log(p) + zeros * std::log1p(-p);
    }
    return ll;
}

Eigen::MatrixXd expected_information(std::span<const ShotBatch> batches, const LikelihoodModel& model,
                                     const Eigen::VectorXd& theta) {
    const Eigen::Index n = model.size();
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(n, n);
    for (const auto& b : batches) {
        const double p = model.probability(theta, b.settings);
        if (!(p > 0.0 && p < 1.0)) {
            continue;
        }
        Eigen::VectorXd grad(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            // Relative to the parameter, but never wider than the box allows.
            const double span = model.upper(k) - model.lower(k);
            const double h = 1e-4 * std::min(std::max(std::abs(theta(k)), 1e-3 * span), span);
            Eigen::VectorXd up = theta;
            Eigen::VectorXd dn = theta;
            up(k) += h;
            dn(k) -= h;
            grad(k) = (model.probability(up, b.settings) - model.probability(dn, b.settings)) / (2.0 * h);
        }
        info += static_cast<double>(b.n_shots) * grad * grad.transpose() / (p * (1.0 - p));
    }
    return info;
}

EstimateReport mle_1d(std::span<const ShotBatch> batches, double omega_s, double sigma, double lo, double hi) {
    const LikelihoodModel model = omega_r_model(omega_s, sigma, lo, hi);
    auto ll = [&](double w) { return log_likelihood(batches, model, Eigen::VectorXd::Constant(1, w)); };

    std::vector<double> grid;
    grid.reserve(kCoarseGrid);
    if (lo == 0.0) {
        grid.push_back(0.0);
        const auto tail = log_spaced(hi * 1e-6, hi, kCoarseGrid - 1);
        grid.insert(grid.end(), tail.begin(), tail.end());
    } else {
        grid = log_spaced(lo, hi, kCoarseGrid);
    }
    std::size_t best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = ll(grid[i]);
        if (v > best_ll) {
            best_ll = v;
            best = i;
        }
    }
    double est = grid[best];
    const double a = grid[best == 0 ? 0 : best - 1];
    const double b = grid[std::min(best + 1, grid.size() - 1)];
    if (b > a) {
        const ScalarOptimum g = golden_section_maximize(ll, a, b, 1e-6);
        if (g.value > best_ll) {
            est = g.x;
            best_ll = g.value;
        }
    }

    EstimateReport r;
    r.names = model.names;
    r.estimate = Eigen::VectorXd::Constant(1, est);
    r.log_likelihood = best_ll;
    r.at_boundary = near_bound(model, r.estimate);
    r.std_error = std_errors(expected_information(batches, model, r.estimate));
    return r;
}

ReplicateStudy replicate_mle_1d(const BatchSettings& truth, std::int64_t n_shots, int replicates, RunSeed seed,
                                double lo, double hi, const StudyOptions& opts) {
    if (replicates < 1) {
        throw InputError("replicate study: replicates must be positive");
    }
    const double sigma = sigma_of(truth.signal);
    ReplicateStudy st;
    st.truth = std::abs(truth.signal.omega_r());
    st.estimates.assign(static_cast<std::size_t>(replicates), 0.0);
    st.n_ones.assign(static_cast<std::size_t>(replicates), 0);
    st.at_boundary.assign(static_cast<std::size_t>(replicates), false);
    SimOptions sim = opts.sim;
    sim.threads = 1;
    parallel_for(replicates, opts.threads, [&](std::int64_t r) {
        const ShotBatch batch = simulate_batch(truth, n_shots, seed.child(static_cast<std::uint64_t>(r)), sim);
        const EstimateReport rep = mle_1d(std::span(&batch, 1), truth.signal.omega_s(), sigma, lo, hi);
        const auto i = static_cast<std::size_t>(r);
        st.estimates[i] = rep.estimate(0);
        st.n_ones[i] = batch.n_ones;
        st.at_boundary[i] = rep.at_boundary;
    });
    double sq = 0.0;
    double sum = 0.0;
    for (const double e : st.estimates) {
        sq += (e - st.truth) * (e - st.truth);
        sum += e - st.truth;
    }
    st.rmse = std::sqrt(sq / replicates);
    st.bias = sum / replicates;
    return st;
}

ScalingResult scaling_study(const BatchSettings& truth, std::span<const std::int64_t> n_list, int replicates,
                            RunSeed seed, double lo, double hi, const StudyOptions& opts) {
    if (replicates < 200) {
        throw InputError("scaling study: at least 200 replicates are required");
    }
    if (n_list.size() < 2) {
        throw InputError("scaling study: need at least two shot counts");
    }
    const auto [mn, mx] = std::minmax_element(n_list.begin(), n_list.end());
    if (*mn < 1 || std::log10(static_cast<double>(*mx) / static_cast<double>(*mn)) < 1.5) {
        throw InputError("scaling study: shot counts must span at least 1.5 decades");
    }
    ScalingResult out;
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        const ReplicateStudy st = replicate_mle_1d(truth, n_list[k], replicates, seed.child(k), lo, hi, opts);
        if (!(st.rmse > 0.0)) {
            throw NumericalError("scaling study: zero RMSE at N = " + std::to_string(n_list[k]) +
                                 "; the model is deterministic and the slope is undefined");
        }
        out.n_shots.push_back(static_cast<double>(n_list[k]));
        out.rmse.push_back(st.rmse);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto m = static_cast<double>(out.rmse.size());
    for (std::size_t k = 0; k < out.rmse.size(); ++k) {
        const double x = std::log(out.n_shots[k]);
        const double y = std::log(out.rmse[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / m;
    return out;
}

ScanResult preliminary_scan(const TwoToneSignal& truth, std::span<const double> delta_grid_t, double t,
                            std::int64_t shots_per_point, RunSeed seed, const SimOptions& sim) {
    if (shots_per_point < 1000) {
        throw InputError("preliminary scan: at least 1000 shots per point are required");
    }
    if (delta_grid_t.size() < 4) {
        throw InputError("preliminary scan: the detuning grid needs at least 4 points");
    }
    if (!(t > 0.0)) {
        throw InputError("preliminary scan: t must be positive");
    }
    std::vector<ShotBatch> batches;
    batches.reserve(delta_grid_t.size());
    for (std::size_t k = 0; k < delta_grid_t.size(); ++k) {
        const BatchSettings s{truth, EffectiveProbe{truth.omega_s() + delta_grid_t[k] / t, t, Convention::Physical}, {}};
        batches.push_back(simulate_batch(s, shots_per_point, seed.child(k), sim));
    }
    ScanResult r = fit_scan(batches, t);
    r.batches = std::move(batches);
    return r;
}

ScanResult fit_scan(std::span<const ShotBatch> batches, double t) {
    if (batches.size() < 4) {
        throw InputError("scan fit: at least 4 batches are required");
    }
    double p_min = 1.0;
    double p_max = 0.0;
    double w_min = std::numeric_limits<double>::infinity();
    double w_max = -w_min;
    std::int64_t n_min = std::numeric_limits<std::int64_t>::max();
    for (const auto& b : batches) {
        const auto* probe = std::get_if<EffectiveProbe>(&b.settings.control);
        if (probe == nullptr) {
            throw InputError("scan fit: batches must use idealized pulse-train controls");
        }
        p_min = std::min(p_min, b.frequency());
        p_max = std::max(p_max, b.frequency());
        w_min = std::min(w_min, probe->omega_p);
        w_max = std::max(w_max, probe->omega_p);
        n_min = std::min(n_min, b.n_shots);
    }
    if (p_min > 0.4) {
        throw ScanFailedError("scan failed: minimum observed frequency " + std::to_string(p_min) +
                              " > 0.4, the grid misses the resonance dip");
    }
    if (p_max - p_min < 5.0 * std::sqrt(0.25 / static_cast<double>(n_min))) {
        throw ScanFailedError("scan failed: no contrast across the grid, it lies far from resonance");
    }

    Eigen::Vector3d lower(0.0, std::max(w_max - 4.0 * kPi / t, 1e-9 * w_max), 0.05 / t);
    Eigen::Vector3d upper(0.0, w_min, 10.0 / t);
    upper(0) = std::min(kPi / t, 0.5 * lower(1));
    const LikelihoodModel model = joint_model(lower, upper);
    auto neg_ll = [&](const Eigen::VectorXd& th) { return -log_likelihood(batches, model, th); };

    std::vector<Eigen::VectorXd> starts;
    for (int k = 0; k < 8; ++k) {
        const double u_s = (k + 0.5) / 8.0;
        const double u_sig = std::fmod(0.3 + 0.618034 * k, 1.0);
        const double u_r = std::fmod(0.1 + 0.381966 * k, 1.0) * 0.5;
        Eigen::VectorXd th(3);
        th << lower(0) + u_r * (upper(0) - lower(0)), lower(1) + u_s * (upper(1) - lower(1)),
            lower(2) * std::pow(upper(2) / lower(2), u_sig);
        starts.push_back(th);
    }
    const VectorOptimum o = box_minimize(neg_ll, model, starts);

    ScanResult r;
    r.report.names = model.names;
    r.report.estimate = o.x;
    r.report.log_likelihood = -o.value;
    r.report.at_boundary = near_bound(model, o.x);
    r.report.std_error = std_errors(expected_information(batches, model, o.x));
    r.omega_r = o.x(0);
    r.omega_s = o.x(1);
    r.sigma = o.x(2);
    return r;
}

EstimateReport mle_multiparam(std::span<const ShotBatch> batches, const Eigen::Vector3d& lower,
                              const Eigen::Vector3d& upper, const Eigen::Vector3d& theta0) {
    if (batches.size() < 3) {
        throw InputError("multiparameter MLE: at least three batches are required");
    }
    const LikelihoodModel model = joint_model(lower, upper);
    bool distinct = false;
    const auto* first = std::get_if<EffectiveProbe>(&batches.front().settings.control);
    for (const auto& b : batches) {
        const auto* p = std::get_if<EffectiveProbe>(&b.settings.control);
        if (first == nullptr || p == nullptr || p->omega_p != first->omega_p || p->t != first->t) {
            distinct = true;
        }
    }
    Eigen::VectorXd probe = model.clamp(theta0);
    probe(0) = std::max(probe(0), 1e-3 * (upper(0) - lower(0)));
    const Eigen::MatrixXd info = expected_information(batches, model, probe);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
    const double ratio = es.eigenvalues().maxCoeff() > 0.0 ? es.eigenvalues().minCoeff() / es.eigenvalues().maxCoeff() : 0.0;
    if (!distinct || ratio < 1e-10) {
        throw PreconditionError("multiparameter MLE: settings are not identifiable, the Fisher matrix is singular");
    }

    auto neg_ll = [&](const Eigen::VectorXd& th) { return -log_likelihood(batches, model, th); };
    const Eigen::Vector3d span = upper - lower;
    std::vector<Eigen::VectorXd> starts{model.clamp(theta0)};
    for (const double s : {-1.0, 1.0}) {
        Eigen::Vector3d d(0.1 * span(0), 0.02 * span(1), 0.02 * span(2));
        starts.push_back(model.clamp(theta0 + s * d));
    }
    const VectorOptimum o = box_minimize(neg_ll, model, starts);

    EstimateReport r;
    r.names = model.names;
    r.estimate = o.x;
    r.log_likelihood = -o.value;
    r.at_boundary = near_bound(model, o.x);
    r.std_error = std_errors(expected_information(batches, model, o.x));
    return r;
}

double predicted_multiparam_error(double fisher_r, std::int64_t n_total) {
    if (!(fisher_r > 0.0) || n_total < 1) {
        throw InputError("predicted error: need positive information and shot count");
    }
    return std::sqrt(3.0 / (fisher_r * static_cast<double>(n_total)));
}

AuxiliaryDetunings optimal_auxiliary_detunings(double sigma_t, Convention c) {
    AuxiliaryDetunings a;
    a.omega_s_opt = maximize_over_detuning([&](double d) { return fisher_omega_s(d, sigma_t, 0.0, c).value; }).delta_s_t;
    a.sigma_opt = maximize_over_detuning([&](double d) { return fisher_sigma(d, sigma_t, 0.0, c).value; }).delta_s_t;
    return a;
}

std::array<BatchSettings, 3> multiparam_settings(const TwoToneSignal& truth, double t) {
    const AuxiliaryDetunings aux = optimal_auxiliary_detunings(sigma_of(truth) * t, Convention::Physical);
    const std::array<double, 3> d{kTwoPi, aux.omega_s_opt, aux.sigma_opt};
    std::array<BatchSettings, 3> out{
        BatchSettings{truth, EffectiveProbe{truth.omega_s() + d[0] / t, t, Convention::Physical}, {}},
        BatchSettings{truth, EffectiveProbe{truth.omega_s() + d[1] / t, t, Convention::Physical}, {}},
        BatchSettings{truth, EffectiveProbe{truth.omega_s() + d[2] / t, t, Convention::Physical}, {}}};
    return out;
}

MultiparamStudy multiparam_study(const TwoToneSignal& truth, double t, std::int64_t shots_per_detuning, int replicates,
                                 RunSeed seed, const StudyOptions& opts) {
    if (replicates < 1) {
        throw InputError("multiparameter study: replicates must be positive");
    }
    const double sigma = sigma_of(truth);
    const auto settings = multiparam_settings(truth, t);
    MultiparamStudy st;
    st.truth = Eigen::Vector3d(std::abs(truth.omega_r()), truth.omega_s(), sigma);
    for (int k = 0; k < 3; ++k) {
        st.detunings_t[static_cast<std::size_t>(k)] =
            (std::get<EffectiveProbe>(settings[static_cast<std::size_t>(k)].control).omega_p - truth.omega_s()) * t;
    }
    const Eigen::Vector3d lower(0.0, truth.omega_s() - 1.0 / t, 0.5 * sigma);
    const Eigen::Vector3d upper(std::min(0.2 / t, 0.5 * truth.omega_s()), truth.omega_s() + 1.0 / t, 2.0 * sigma);
    st.estimates.assign(static_cast<std::size_t>(replicates), Eigen::Vector3d::Zero());
    st.n_ones.assign(static_cast<std::size_t>(replicates), {});
    SimOptions sim = opts.sim;
    sim.threads = 1;
    parallel_for(replicates, opts.threads, [&](std::int64_t r) {
        const RunSeed rs = seed.child(static_cast<std::uint64_t>(r));
        std::vector<ShotBatch> batches;
        for (std::size_t k = 0; k < 3; ++k) {
            batches.push_back(simulate_batch(settings[k], shots_per_detuning, rs.child(k), sim));
        }
        const EstimateReport rep = mle_multiparam(batches, lower, upper, st.truth);
        const auto i = static_cast<std::size_t>(r);
        st.estimates[i] = rep.estimate;
        st.n_ones[i] = {batches[0].n_ones, batches[1].n_ones, batches[2].n_ones};
    });
    Eigen::Vector3d sq = Eigen::Vector3d::Zero();
    for (const auto& e : st.estimates) {
        sq += (e - st.truth).cwiseAbs2();
    }
    st.rmse = (sq / replicates).cwiseSqrt();
    return st;
}

}  // namespace superres
