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

#include "isac3d/system_config.hpp"

#include "isac3d/common.hpp"

#include <cmath>

namespace isac3d {

double SystemConfig::wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }

double SystemConfig::sample_period_s() const
{
    return 1.0 / (static_cast<double>(num_subcarriers) * subcarrier_spacing_hz);
}

double SystemConfig::bandwidth_hz() const
{
    return static_cast<double>(num_subcarriers) * subcarrier_spacing_hz;
}

double SystemConfig::max_range_m() const { return kSpeedOfLight * cp_duration_s / 2.0; }

double SystemConfig::max_velocity_mps() const
{
    return wavelength_m() / (4.0 * total_symbol_duration_s());
}

double SystemConfig::range_resolution_m() const { return kSpeedOfLight / (2.0 * bandwidth_hz()); }

double SystemConfig::velocity_resolution_mps() const
{
    return wavelength_m() /
           (2.0 * static_cast<double>(num_symbols) * total_symbol_duration_s());
}

void SystemConfig::validate() const
{
    if (num_subcarriers == 0 || num_symbols == 0 || num_rx_antennas == 0)
        throw DomainError("SystemConfig: N, M and P must all be >= 1");
    if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz))
        throw DomainError("SystemConfig: carrier frequency must be positive");
    if (!(subcarrier_spacing_hz > 0.0) || !std::isfinite(subcarrier_spacing_hz))
        throw DomainError("SystemConfig: subcarrier spacing must be positive");
    if (!(cp_duration_s >= 0.0) || !std::isfinite(cp_duration_s))
        throw DomainError("SystemConfig: cyclic prefix duration must be non-negative");
    if (!(antenna_spacing_m > 0.0) || !std::isfinite(antenna_spacing_m))
        throw DomainError("SystemConfig: antenna spacing must be positive");
    if (psk_order < 2)
        throw DomainError("SystemConfig: PSK order must be >= 2");
}

std::vector<std::string> SystemConfig::warnings() const
{
    std::vector<std::string> out;
    if (antenna_spacing_m > wavelength_m() / 2.0 * (1.0 + 1e-12))
        out.emplace_back("antenna spacing exceeds lambda/2: spatial phase is ambiguous (grating lobes)");
    return out;
}

double max_detectable_range(const SystemConfig& cfg) { return cfg.max_range_m(); }

namespace {

SystemConfig nr_config(double scs_hz, std::size_t n, std::size_t m, double cp_s)
{
    SystemConfig cfg;
    cfg.carrier_freq_hz = 27e9;
    cfg.subcarrier_spacing_hz = scs_hz;
    cfg.num_subcarriers = n;
    cfg.num_symbols = m;
    cfg.num_rx_antennas = 8;
    cfg.antenna_spacing_m = cfg.wavelength_m() / 2.0;
    cfg.cp_duration_s = cp_s;
    cfg.psk_order = 4;
    return cfg;
}

} // namespace

SystemConfig preset(std::string_view name)
{
    if (name == "nr60")
        return nr_config(60e3, 240, 56, 1.2e-6);
    if (name == "nr120")
        return nr_config(120e3, 120, 112, 0.59e-6);
    if (name == "nr120-desk")
        return nr_config(120e3, 64, 32, 0.59e-6);
    throw PreconditionError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"nr60", "nr120", "nr120-desk"}; }

} // namespace isac3d
