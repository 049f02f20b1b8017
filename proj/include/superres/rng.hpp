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

#ifndef SUPERRES_RNG_HPP
#define SUPERRES_RNG_HPP

#include <cstdint>
#include <random>

namespace superres {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Identifies one independent random stream. Child streams are derived by
/// hashing, so any tree of (replicate, setting, chunk) indices maps to a
/// reproducible stream regardless of scheduling.
struct RunSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    RunSeed child(std::uint64_t k) const noexcept {
        return {master_seed, splitmix64(stream_index ^ splitmix64(k + 0x632be59bd9b4e019ULL))};
    }
    friend bool operator==(const RunSeed&, const RunSeed&) = default;
};

class Rng {
   public:
    explicit Rng(RunSeed seed);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    bool bernoulli(double p) { return uniform() < p; }
    std::int64_t binomial(std::int64_t n, double p);
    std::mt19937_64& engine() noexcept { return engine_; }

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace superres

#endif
