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

#include "isac3d/common.hpp"
#include "isac3d/system_config.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace isac3d {

/// Point target: ground truth geometry plus complex echo amplitude.
struct Target {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double azimuth_rad = 0.0;
    cdouble amplitude{1.0, 0.0};

    double delay_s() const { return 2.0 * range_m / kSpeedOfLight; }
    double doppler_hz(const SystemConfig& cfg) const
    {
        return 2.0 * cfg.carrier_freq_hz * velocity_mps / kSpeedOfLight;
    }
};

/// Throws DomainError if the target is outside (0, R_max] x [-v_u, v_u] x (-pi/2, pi/2).
void validate_target(const Target& target, const SystemConfig& cfg);

/// Per-target phase progressions along subcarrier, symbol and antenna axes.
struct PhaseTriple {
    double range_phase = 0.0;     // 2 pi df tau
    double doppler_phase = 0.0;   // 2 pi f_d T_bar
    double spatial_phase = 0.0;   // 2 pi d sin(theta) / lambda
};

PhaseTriple derive_phases(const Target& target, const SystemConfig& cfg);

enum class SteeringKind { Doppler, Range, Space };

/// Doppler and space vectors advance as e^{+j k phase}; the range vector
/// advances as e^{-j k phase}.
Eigen::VectorXcd steering_vector(SteeringKind kind, double phase, std::size_t length);

/// Kronecker steering vector a_S(psi,P) (x) a_R(phi,N) (x) a_D(varphi,M);
/// element index is p*N*M + n*M + m (symbol fastest).
Eigen::VectorXcd array_steering_vector(const PhaseTriple& phases, std::size_t antennas,
                                       std::size_t symbols, std::size_t subcarriers);

/// Unit-modulus M_p-PSK data symbols, M x N (row = OFDM symbol).
Eigen::MatrixXcd generate_psk_symbols(const SystemConfig& cfg, std::uint64_t seed);

/// Post-division frequency-domain observation z_{p,m}(n).
///
/// Storage is antenna-major, then symbol, then subcarrier (subcarrier
/// fastest), matching the binary observation file layout. `vectorized()`
/// returns the symbol-fastest Kronecker ordering used by the estimators.
class ObservationTensor {
public:
    ObservationTensor() = default;
    ObservationTensor(std::size_t antennas, std::size_t symbols, std::size_t subcarriers,
                      double noise_var = 0.0);

    std::size_t antennas() const { return antennas_; }
    std::size_t symbols() const { return symbols_; }
    std::size_t subcarriers() const { return subcarriers_; }
    std::size_t size() const { return data_.size(); }

    double noise_var() const { return noise_var_; }
    void set_noise_var(double v) { noise_var_ = v; }

    cdouble& at(std::size_t p, std::size_t m, std::size_t n)
    {
        return data_[(p * symbols_ + m) * subcarriers_ + n];
    }
    const cdouble& at(std::size_t p, std::size_t m, std::size_t n) const
    {
        return data_[(p * symbols_ + m) * subcarriers_ + n];
    }

    std::span<cdouble> data() { return data_; }
    std::span<const cdouble> data() const { return data_; }

    Eigen::VectorXcd vectorized() const;

private:
    std::size_t antennas_ = 0;
    std::size_t symbols_ = 0;
    std::size_t subcarriers_ = 0;
    double noise_var_ = 0.0;
    std::vector<cdouble> data_;
};

/// Noisy observation z = sum_i beta_i e^{jp psi} e^{jm varphi} e^{-jn phi} + v,
/// v ~ CN(0, noise_var) i.i.d. Data symbols are assumed already divided out.
ObservationTensor synthesize_observation(const SystemConfig& cfg, std::span<const Target> targets,
                                         double noise_var, std::uint64_t seed);

/// Same observation with the noise drawn from an existing generator.
ObservationTensor synthesize_observation(const SystemConfig& cfg, std::span<const Target> targets,
                                         double noise_var, Rng& rng);

// --------------------------------------------------------------------------
// Time-domain transmit/receive chain (validation path)
// --------------------------------------------------------------------------

enum class DopplerModel {
    PerSymbol,  // phase e^{j 2 pi m f_d T_bar}, constant within a symbol
    PerSample,  // phase e^{j 2 pi f_d t} at every sample instant
};

/// Received baseband samples after down-conversion and sampling at T_s.
/// Each OFDM symbol contributes `cp_samples + subcarriers` samples.
struct TimeDomainSignal {
    std::size_t antennas = 0;
    std::size_t symbols = 0;
    std::size_t subcarriers = 0;
    std::size_t cp_samples = 0;
    double noise_var = 0.0;           // per-sample sigma^2
    std::vector<cdouble> samples;     // [p][m][cp_samples + subcarriers]

    std::size_t samples_per_symbol() const { return cp_samples + subcarriers; }
    const cdouble* symbol_begin(std::size_t p, std::size_t m) const
    {
        return samples.data() + (p * symbols + m) * samples_per_symbol();
    }
};

TimeDomainSignal synthesize_time_domain(const SystemConfig& cfg, std::span<const Target> targets,
                                        const Eigen::MatrixXcd& data_symbols, double noise_var,
                                        std::uint64_t seed,
                                        DopplerModel doppler = DopplerModel::PerSymbol);

/// CP removal, unnormalized N-point DFT per symbol, division by the data
/// symbols. The resulting noise variance is N * sigma^2.
ObservationTensor demodulate(const TimeDomainSignal& signal, const Eigen::MatrixXcd& data_symbols);

} // namespace isac3d
