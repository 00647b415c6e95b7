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

#include "isac3d/model.hpp"

#include <cmath>
#include <sstream>

namespace isac3d {

void validate_target(const Target& target, const SystemConfig& cfg)
{
    const double r_max = cfg.max_range_m();
    if (!std::isfinite(target.range_m) || !(target.range_m > 0.0)) {
        std::ostringstream os;
        os << "target range " << target.range_m << " m must be positive";
        throw DomainError(os.str());
    }
    if (target.range_m > r_max * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "target range " << target.range_m
           << " m exceeds the maximum detectable range c*T_cp/2 = " << r_max << " m";
        throw DomainError(os.str());
    }
    const double v_u = cfg.max_velocity_mps();
    if (!std::isfinite(target.velocity_mps) || std::abs(target.velocity_mps) > v_u * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "target velocity " << target.velocity_mps
           << " m/s exceeds the unambiguous velocity lambda/(4 T_bar) = " << v_u << " m/s";
        throw DomainError(os.str());
    }
    if (!std::isfinite(target.azimuth_rad) || std::abs(target.azimuth_rad) >= kPi / 2.0) {
        std::ostringstream os;
        os << "target azimuth " << target.azimuth_rad << " rad must satisfy |theta| < pi/2";
        throw DomainError(os.str());
    }
}

PhaseTriple derive_phases(const Target& target, const SystemConfig& cfg)
{
    validate_target(target, cfg);
    PhaseTriple ph;
    ph.range_phase = 2.0 * kPi * cfg.subcarrier_spacing_hz * target.delay_s();
    ph.doppler_phase = 2.0 * kPi * target.doppler_hz(cfg) * cfg.total_symbol_duration_s();
    ph.spatial_phase = 2.0 * kPi * cfg.antenna_spacing_m * std::sin(target.azimuth_rad) /
                       cfg.wavelength_m();
    return ph;
}

Eigen::VectorXcd steering_vector(SteeringKind kind, double phase, std::size_t length)
{
    if (length == 0)
        throw DomainError("steering_vector: length must be >= 1");
    const double sign = kind == SteeringKind::Range ? -1.0 : 1.0;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(length));
    for (std::size_t k = 0; k < length; ++k)
        v[static_cast<Eigen::Index>(k)] = std::polar(1.0, sign * static_cast<double>(k) * phase);
    return v;
}

Eigen::VectorXcd array_steering_vector(const PhaseTriple& phases, std::size_t antennas,
                                       std::size_t symbols, std::size_t subcarriers)
{
    const Eigen::VectorXcd a_s = steering_vector(SteeringKind::Space, phases.spatial_phase, antennas);
    const Eigen::VectorXcd a_r = steering_vector(SteeringKind::Range, phases.range_phase, subcarriers);
    const Eigen::VectorXcd a_d = steering_vector(SteeringKind::Doppler, phases.doppler_phase, symbols);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(antennas * symbols * subcarriers));
    Eigen::Index idx = 0;
    for (Eigen::Index p = 0; p < a_s.size(); ++p)
        for (Eigen::Index n = 0; n < a_r.size(); ++n) {
            const cdouble sr = a_s[p] * a_r[n];
            for (Eigen::Index m = 0; m < a_d.size(); ++m)
                out[idx++] = sr * a_d[m];
        }
    return out;
}

Eigen::MatrixXcd generate_psk_symbols(const SystemConfig& cfg, std::uint64_t seed)
{
    if (cfg.psk_order < 2)
        throw DomainError("generate_psk_symbols: PSK order must be >= 2");
    Rng rng(seed);
    std::uniform_int_distribution<unsigned> pick(0, cfg.psk_order - 1);
    const auto rows = static_cast<Eigen::Index>(cfg.num_symbols);
    const auto cols = static_cast<Eigen::Index>(cfg.num_subcarriers);
    Eigen::MatrixXcd s(rows, cols);
    const double step = 2.0 * kPi / static_cast<double>(cfg.psk_order);
    for (Eigen::Index m = 0; m < rows; ++m)
        for (Eigen::Index n = 0; n < cols; ++n)
            s(m, n) = std::polar(1.0, step * static_cast<double>(pick(rng)));
    return s;
}

ObservationTensor::ObservationTensor(std::size_t antennas, std::size_t symbols,
                                     std::size_t subcarriers, double noise_var)
    : antennas_(antennas), symbols_(symbols), subcarriers_(subcarriers), noise_var_(noise_var),
      data_(antennas * symbols * subcarriers)
{
}

Eigen::VectorXcd ObservationTensor::vectorized() const
{
    Eigen::VectorXcd b(static_cast<Eigen::Index>(data_.size()));
    Eigen::Index idx = 0;
    for (std::size_t p = 0; p < antennas_; ++p)
        for (std::size_t n = 0; n < subcarriers_; ++n)
            for (std::size_t m = 0; m < symbols_; ++m)
                b[idx++] = at(p, m, n);
    return b;
}

ObservationTensor synthesize_observation(const SystemConfig& cfg, std::span<const Target> targets,
                                         double noise_var, std::uint64_t seed)
{
    Rng rng(seed);
    return synthesize_observation(cfg, targets, noise_var, rng);
}

ObservationTensor synthesize_observation(const SystemConfig& cfg, std::span<const Target> targets,
                                         double noise_var, Rng& rng)
{
    cfg.validate();
    if (!(noise_var >= 0.0) || !std::isfinite(noise_var))
        throw DomainError("synthesize_observation: noise variance must be >= 0");

    const std::size_t P = cfg.num_rx_antennas;
    const std::size_t M = cfg.num_symbols;
    const std::size_t N = cfg.num_subcarriers;
    ObservationTensor obs(P, M, N, noise_var);

    for (const Target& t : targets) {
        const PhaseTriple ph = derive_phases(t, cfg);
        const Eigen::VectorXcd a_s = steering_vector(SteeringKind::Space, ph.spatial_phase, P);
        const Eigen::VectorXcd a_d = steering_vector(SteeringKind::Doppler, ph.doppler_phase, M);
        const Eigen::VectorXcd a_r = steering_vector(SteeringKind::Range, ph.range_phase, N);
        for (std::size_t p = 0; p < P; ++p)
            for (std::size_t m = 0; m < M; ++m) {
                const cdouble c = t.amplitude * a_s[static_cast<Eigen::Index>(p)] *
                                  a_d[static_cast<Eigen::Index>(m)];
                for (std::size_t n = 0; n < N; ++n)
                    obs.at(p, m, n) += c * a_r[static_cast<Eigen::Index>(n)];
            }
    }

    if (noise_var > 0.0)
        for (cdouble& z : obs.data())
            z += complex_gaussian(rng, noise_var);
    return obs;
}

} // namespace isac3d
