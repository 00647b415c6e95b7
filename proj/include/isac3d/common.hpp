// SPDX-License-Identifier: Apache-2.0
//
// isac3d: joint range, velocity and azimuth estimation for OFDM sensing
// Copyright (C) 2026 The isac3d authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace isac3d {

using cdouble = std::complex<double>;

/// Propagation speed used throughout the model (m/s). The rounded value
/// reproduces the 5G NR reference table (R_max = 180 m at T_cp = 1.2 us).
inline constexpr double kSpeedOfLight = 3.0e8;

inline constexpr double kPi = std::numbers::pi;

/// A parameter or configuration lies outside the model's validity domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller-supplied argument violates an operation precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The shift-invariance systems are rank deficient (targets not resolvable).
class DegenerateGeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The Fisher information is singular, typically because two targets coincide.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// splitmix64 finalizer; used to derive independent per-trial streams.
constexpr std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t first, Rest... rest)
{
    std::uint64_t h = mix_seed(first);
    ((h = mix_seed(h ^ static_cast<std::uint64_t>(rest))), ...);
    return h;
}

using Rng = std::mt19937_64;

/// Circularly-symmetric complex Gaussian sample with E|x|^2 = variance.
inline cdouble complex_gaussian(Rng& rng, double variance)
{
    std::normal_distribution<double> dist(0.0, std::sqrt(variance / 2.0));
    const double re = dist(rng);
    const double im = dist(rng);
    return {re, im};
}

} // namespace isac3d
