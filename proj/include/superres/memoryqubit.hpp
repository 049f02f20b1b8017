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


#ifndef SUPERRES_MEMORYQUBIT_HPP
#define SUPERRES_MEMORYQUBIT_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "superres/rng.hpp"
#include "superres/signal.hpp"

namespace superres {

/// Register state (1/sqrt(N)) sum_j exp(i phi_j) |j> built from N = n*m
/// sampling windows of length tau = 2 pi / (n omega_s), covering T = m 2 pi / omega_s.
class PhaseState {
   public:
    PhaseState(Eigen::VectorXcd amplitudes, int n, int m, double tau);

    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    Eigen::Index size() const noexcept { return amplitudes_.size(); }
    double tau() const noexcept { return tau_; }
    double total_time() const noexcept { return tau_ * static_cast<double>(amplitudes_.size()); }

   private:
    Eigen::VectorXcd amplitudes_;
    int n_;
    int m_;
    double tau_;
};

inline constexpr std::int64_t kMaxRegister = std::int64_t{1} << 16;

PhaseState build_phase_state(const Quadratures& q, const TwoToneSignal& s, int n, int m);

/// |unitary DFT|^2 of the amplitudes; sums to 1.
Eigen::VectorXd dft_spectrum(const PhaseState& state);

/// Weight on indices not divisible by m.
double nonharmonic_probability(const Eigen::VectorXd& spectrum, int n, int m);

/// (2/3) (sigma tau)^2 T^2.
double qft_fisher(double sigma, double tau, double big_t);

/// 2 sigma^2 tau^2 omega_r^2 T^2; T must be a whole number of signal periods.
double correlation_probability(double sigma, double tau, double big_t, double omega_s, double omega_r);

/// 8 (sigma tau)^2 T^2 under the same condition on T.
double correlation_fisher(double sigma, double tau, double big_t, double omega_s);

/// Phase collected over [start, start + tau] by both tones.
double window_phase(const Quadratures& q, const TwoToneSignal& s, double start, double tau);

/// sin^2 of the phase difference between windows at 0 and big_t.
double correlation_shot_probability(const Quadratures& q, const TwoToneSignal& s, double tau, double big_t);

struct McMean {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t draws = 0;
};

/// Mean nonharmonic weight over amplitude draws; draw k uses seed.child(k).
McMean qft_nonharmonic_mc(const TwoToneSignal& s, int n, int m, std::int64_t draws, RunSeed seed, int threads = 1);

/// Mean correlation-scheme transition probability over amplitude draws.
McMean correlation_mc(const TwoToneSignal& s, double tau, double big_t, std::int64_t draws, RunSeed seed,
                      int threads = 1);

}  // namespace superres

#endif
