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

#include "fft.hpp"

#include <cmath>

namespace isac3d {

namespace {

struct PreparedTarget {
    cdouble amplitude;  // alpha' = beta / N
    double delay_s;
    double doppler_hz;
    double spatial_phase;
};

} // namespace

TimeDomainSignal synthesize_time_domain(const SystemConfig& cfg, std::span<const Target> targets,
                                        const Eigen::MatrixXcd& data_symbols, double noise_var,
                                        std::uint64_t seed, DopplerModel doppler)
{
    cfg.validate();
    const std::size_t P = cfg.num_rx_antennas;
    const std::size_t M = cfg.num_symbols;
    const std::size_t N = cfg.num_subcarriers;
    if (static_cast<std::size_t>(data_symbols.rows()) != M ||
        static_cast<std::size_t>(data_symbols.cols()) != N)
        throw PreconditionError("synthesize_time_domain: data symbol matrix must be M x N");
    if (!(noise_var >= 0.0))
        throw DomainError("synthesize_time_domain: noise variance must be >= 0");

    const double T = cfg.symbol_duration_s();
    const double T_bar = cfg.total_symbol_duration_s();
    const double T_cp = cfg.cp_duration_s;
    const double T_s = cfg.sample_period_s();
    const double df = cfg.subcarrier_spacing_hz;

    std::vector<PreparedTarget> prepared;
    for (const Target& t : targets) {
        const PhaseTriple ph = derive_phases(t, cfg);
        if (t.delay_s() > T_cp * (1.0 + 1e-12))
            throw DomainError("synthesize_time_domain: target delay exceeds the cyclic prefix");
        prepared.push_back({t.amplitude / static_cast<double>(N), t.delay_s(), t.doppler_hz(cfg),
                            ph.spatial_phase});
    }

    TimeDomainSignal sig;
    sig.antennas = P;
    sig.symbols = M;
    sig.subcarriers = N;
    sig.cp_samples = static_cast<std::size_t>(std::lround(T_cp / T_s));
    sig.noise_var = noise_var;
    const std::size_t L = sig.samples_per_symbol();
    sig.samples.assign(P * M * L, cdouble{});

    for (const PreparedTarget& tg : prepared) {
        for (std::size_t m = 0; m < M; ++m) {
            for (std::size_t s = 0; s < L; ++s) {
                // Sample instant relative to the start of the useful part of symbol m.
                const double k = static_cast<double>(s) - static_cast<double>(sig.cp_samples);
                const double t_abs = static_cast<double>(m) * T_bar + k * T_s;
                // Transmit symbol whose support [-T_cp, T) contains t - tau.
                double u = k * T_s - tg.delay_s;
                std::ptrdiff_t tx = static_cast<std::ptrdiff_t>(m);
                while (u < -T_cp) {
                    u += T_bar;
                    --tx;
                }
                while (u >= T) {
                    u -= T_bar;
                    ++tx;
                }
                if (tx < 0 || tx >= static_cast<std::ptrdiff_t>(M))
                    continue;

                const cdouble w = std::polar(1.0, 2.0 * kPi * df * u);
                cdouble rot{1.0, 0.0};
                cdouble acc{};
                for (std::size_t n = 0; n < N; ++n) {
                    acc += data_symbols(tx, static_cast<Eigen::Index>(n)) * rot;
                    rot *= w;
                }
                const double dop_phase =
                    doppler == DopplerModel::PerSymbol
                        ? 2.0 * kPi * tg.doppler_hz * static_cast<double>(tx) * T_bar
                        : 2.0 * kPi * tg.doppler_hz * t_abs;
                const cdouble common = tg.amplitude * std::polar(1.0, dop_phase) * acc;
                for (std::size_t p = 0; p < P; ++p)
                    sig.samples[(p * M + m) * L + s] +=
                        common * std::polar(1.0, static_cast<double>(p) * tg.spatial_phase);
            }
        }
    }

    if (noise_var > 0.0) {
        Rng rng(seed);
        for (cdouble& y : sig.samples)
            y += complex_gaussian(rng, noise_var);
    }
    return sig;
}

ObservationTensor demodulate(const TimeDomainSignal& signal, const Eigen::MatrixXcd& data_symbols)
{
    const std::size_t P = signal.antennas;
    const std::size_t M = signal.symbols;
    const std::size_t N = signal.subcarriers;
    if (static_cast<std::size_t>(data_symbols.rows()) != M ||
        static_cast<std::size_t>(data_symbols.cols()) != N)
        throw PreconditionError("demodulate: data symbol matrix must be M x N");

    ObservationTensor obs(P, M, N, static_cast<double>(N) * signal.noise_var);
    auto buf = obs.data();
    for (std::size_t p = 0; p < P; ++p)
        for (std::size_t m = 0; m < M; ++m) {
            const cdouble* useful = signal.symbol_begin(p, m) + signal.cp_samples;
            std::copy(useful, useful + N, buf.begin() + static_cast<std::ptrdiff_t>((p * M + m) * N));
        }
    detail::fft_forward_batch(buf, static_cast<int>(N), static_cast<int>(P * M));
    for (std::size_t p = 0; p < P; ++p)
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < N; ++n)
                obs.at(p, m, n) /= data_symbols(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    return obs;
}

} // namespace isac3d
