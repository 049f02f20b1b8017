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

#ifndef SUPERRES_ESTIMATION_HPP
#define SUPERRES_ESTIMATION_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "superres/montecarlo.hpp"

namespace superres {

/// Box-bounded parametric family of outcome probabilities. The probability
/// map sees only what the experimenter controls (BatchSettings::control and
/// noise); the signal stored in a batch is the simulation truth and is ignored.
struct LikelihoodModel {
    std::vector<std::string> names;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    std::function<double(const Eigen::VectorXd& theta, const BatchSettings& known)> probability;

    Eigen::Index size() const noexcept { return lower.size(); }
    void validate() const;
    Eigen::VectorXd clamp(const Eigen::VectorXd& theta) const;
};

/// theta = (omega_r) with omega_s and sigma known.
LikelihoodModel omega_r_model(double omega_s, double sigma, double lo, double hi);

/// theta = (omega_r, omega_s, sigma) for a Gaussian two-tone signal.
LikelihoodModel joint_model(const Eigen::Vector3d& lower, const Eigen::Vector3d& upper);

struct EstimateReport {
    std::vector<std::string> names;
    Eigen::VectorXd estimate;
    Eigen::VectorXd std_error;  // from the expected information; +inf when singular
    double log_likelihood = 0.0;
    bool at_boundary = false;
    std::optional<Eigen::VectorXd> rmse;  // filled in study mode
};

/// Binomial log-likelihood with p clamped to [1e-12, 1 - 1e-12].
double log_likelihood(std::span<const ShotBatch> batches, const LikelihoodModel& model, const Eigen::VectorXd& theta);

/// Expected Fisher information of the batches at theta (central differences).
Eigen::MatrixXd expected_information(std::span<const ShotBatch> batches, const LikelihoodModel& model,
                                     const Eigen::VectorXd& theta);

/// Maximum-likelihood omega_r: 512-point log grid then golden-section refinement.
EstimateReport mle_1d(std::span<const ShotBatch> batches, double omega_s, double sigma, double lo, double hi);

struct ReplicateStudy {
    std::vector<double> estimates;
    std::vector<std::int64_t> n_ones;  // counts behind each estimate
    std::vector<bool> at_boundary;
    double truth = 0.0;
    double rmse = 0.0;
    double bias = 0.0;
};

struct StudyOptions {
    SimOptions sim{};
    int threads = 1;  // replicates run concurrently; results do not depend on this
};

/// Replicated single-batch omega_r estimation; replicate r uses seed.child(r).
ReplicateStudy replicate_mle_1d(const BatchSettings& truth, std::int64_t n_shots, int replicates, RunSeed seed,
                                double lo, double hi, const StudyOptions& opts = {});

struct ScalingResult {
    std::vector<double> n_shots;
    std::vector<double> rmse;
    double slope = 0.0;
    double intercept = 0.0;  // log RMSE at N = 1
};

/// Least-squares slope of log RMSE against log N. Needs at least 200
/// replicates and N values spanning 1.5 decades.
ScalingResult scaling_study(const BatchSettings& truth, std::span<const std::int64_t> n_list, int replicates,
                            RunSeed seed, double lo, double hi, const StudyOptions& opts = {});

struct ScanResult {
    double omega_s = 0.0;
    double sigma = 0.0;
    double omega_r = 0.0;
    EstimateReport report;
    std::vector<ShotBatch> batches;
};

/// Detuning scan with idealized pulse trains at omega_p = omega_s + delta / t
/// followed by a joint fit of (omega_r, omega_s, sigma) from 8 scattered starts.
ScanResult preliminary_scan(const TwoToneSignal& truth, std::span<const double> delta_grid_t, double t,
                            std::int64_t shots_per_point, RunSeed seed, const SimOptions& sim = {});

/// The fitting half of preliminary_scan, for externally supplied batches.
ScanResult fit_scan(std::span<const ShotBatch> batches, double t);

/// Joint MLE over batches taken at distinct controls, started from theta0.
EstimateReport mle_multiparam(std::span<const ShotBatch> batches, const Eigen::Vector3d& lower,
                              const Eigen::Vector3d& upper, const Eigen::Vector3d& theta0);

/// sqrt(3 / (I_r N_total)) for equal allocation over three detunings.
double predicted_multiparam_error(double fisher_r, std::int64_t n_total);

struct AuxiliaryDetunings {
    double omega_s_opt = 0.0;  // maximizer of the omega_s information
    double sigma_opt = 0.0;    // maximizer of the sigma information
};

/// Maximizers over delta_s t in (pi, 2 pi) at omega_r = 0.
AuxiliaryDetunings optimal_auxiliary_detunings(double sigma_t, Convention c);

struct MultiparamStudy {
    std::vector<Eigen::Vector3d> estimates;
    std::vector<std::array<std::int64_t, 3>> n_ones;
    Eigen::Vector3d truth;
    Eigen::Vector3d rmse;
    std::array<double, 3> detunings_t{};
};

/// Replicated three-detuning protocol with idealized pulse trains of duration t.
MultiparamStudy multiparam_study(const TwoToneSignal& truth, double t, std::int64_t shots_per_detuning, int replicates,
                                 RunSeed seed, const StudyOptions& opts = {});

/// Settings of the three-detuning protocol for a given truth and duration.
std::array<BatchSettings, 3> multiparam_settings(const TwoToneSignal& truth, double t);

}  // namespace superres

#endif
