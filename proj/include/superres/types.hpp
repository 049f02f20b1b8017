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

#ifndef SUPERRES_TYPES_HPP
#define SUPERRES_TYPES_HPP

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace superres {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Eigen::Index;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Which amplitude normalization a result refers to. Physical amplitudes are
/// the bare signal quadratures, so a pi-pulse train contributes its 2/pi
/// prefactor; Effective amplitudes already absorb it.
enum class Convention { Physical, Effective };

inline constexpr double amplitude_scale(Convention c) noexcept {
    return c == Convention::Physical ? 2.0 / std::numbers::pi : 1.0;
}

inline constexpr const char* to_string(Convention c) noexcept {
    return c == Convention::Physical ? "physical" : "effective";
}

/// A scalar tagged with the convention it was computed in.
struct Labeled {
    double value = 0.0;
    Convention convention = Convention::Physical;
};

}  // namespace superres

#endif
