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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace isac3d {

/// Waveform, array and sampling constants of an OFDM sensing front end.
///
/// A single transmit antenna illuminates the scene; echoes are received on a
/// uniform linear array of `num_rx_antennas` elements. All derived timing
/// quantities follow from the subcarrier spacing and the cyclic prefix.
struct SystemConfig {
    double carrier_freq_hz = 27e9;
    double subcarrier_spacing_hz = 120e3;
    std::size_t num_subcarriers = 120;
    std::size_t num_symbols = 112;
    std::size_t num_rx_antennas = 8;
    double antenna_spacing_m = 0.5 * 3.0e8 / 27e9;  // lambda/2 at 27 GHz
    double cp_duration_s = 0.59e-6;
    unsigned psk_order = 4;

    double symbol_duration_s() const { return 1.0 / subcarrier_spacing_hz; }
    double total_symbol_duration_s() const { return symbol_duration_s() + cp_duration_s; }
    double wavelength_m() const;
    double sample_period_s() const;
    double bandwidth_hz() const;

    /// c * T_cp / 2
    double max_range_m() const;
    /// lambda / (4 * T_bar)
    double max_velocity_mps() const;
    /// c / (2B)
    double range_resolution_m() const;
    /// lambda / (2 * M * T_bar)
    double velocity_resolution_mps() const;

    /// Throws DomainError when a count is zero or a derived duration is not
    /// strictly positive.
    void validate() const;

    /// Non-fatal issues, e.g. element spacing above lambda/2.
    std::vector<std::string> warnings() const;
};

double max_detectable_range(const SystemConfig& cfg);

/// Registered presets: "nr60", "nr120" (5G NR FR2 numerology, 14.4 MHz) and
/// "nr120-desk", a reduced nr120 grid (N=64, M=32) for fast Monte Carlo runs.
SystemConfig preset(std::string_view name);
std::vector<std::string> preset_names();

} // namespace isac3d
