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

#ifndef SUPERRES_MONTECARLO_HPP
#define SUPERRES_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "superres/analytics.hpp"
#include "superres/rng.hpp"
#include "superres/signal.hpp"

namespace superres {

/// Everything the experimenter fixes for one batch of shots.
struct BatchSettings {
    TwoToneSignal signal;
    Control control;
    NoiseSpec noise;
};

struct ShotBatch {
    std::int64_t n_shots = 0;
    std::int64_t n_ones = 0;
    BatchSettings settings;

    double frequency() const noexcept {
        return n_shots > 0 ? static_cast<double>(n_ones) / static_cast<double>(n_shots) : 0.0;
    }
};

enum class Sampler {
    PerShot,   // draw quadratures and an outcome for every shot
    Binomial,  // one binomial draw per chunk from the closed-form probability
};

struct SimOptions {
    int threads = 1;
    Sampler sampler = Sampler::PerShot;
    double ou_dt = 0.0;  // 0 selects default_ou_dt
};

/// Shots per independent RNG stream inside a batch.
inline constexpr std::int64_t kChunkShots = std::int64_t{1} << 16;

Quadratures draw_quadratures(const AmplitudeModel& model, Rng& rng);

/// Probability of the bright outcome for one shot with accumulated phase phi.
double shot_probability(double phi, double kappa_t, const NoiseSpec& noise);

/// Deterministic in (settings, n_shots, seed); the thread count only changes speed.
ShotBatch simulate_batch(const BatchSettings& settings, std::int64_t n_shots, RunSeed seed, const SimOptions& opts = {});

/// Mean-reverting process with exact discrete transitions.
class OuProcess {
   public:
    explicit OuProcess(OuParams p);
    double stationary_std() const noexcept;
    double sample_stationary(Rng& rng) const;
    double step(double x, double dt, Rng& rng) const;

   private:
    OuParams p_;
};

/// One period of omega_s split into 100 steps.
double default_ou_dt(const TwoToneSignal& s);

/// Phase of one shot whose four quadratures drift as independent OU processes
/// started from their stationary law. Free evolution or an exact pulse train.
double simulate_ou_shot(const TwoToneSignal& s, const OuParams& ou, const Control& c, double dt, Rng& rng);

/// Same with prescribed initial quadratures instead of stationary draws.
double simulate_ou_shot_from(const TwoToneSignal& s, const OuParams& ou, const Control& c, double dt, Rng& rng,
                             const Quadratures& start);

/// Phases of n OU shots; stream k of seed drives shot k.
std::vector<double> simulate_ou_phases(const TwoToneSignal& s, const OuParams& ou, const Control& c, std::int64_t n,
                                       RunSeed seed, double dt = 0.0);

/// Time grid of an OU shot together with the terminal quadrature values, for
/// checking stationarity.
struct OuPathEnd {
    double phase = 0.0;
    Quadratures final_values;
};
OuPathEnd simulate_ou_shot_with_end(const TwoToneSignal& s, const OuParams& ou, const Control& c, double dt, Rng& rng);

}  // namespace superres

#endif
