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

#include "isac3d/model.hpp"

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace isac3d {

/// Magnitude of a zero-padded DFT of the observation.
///
/// Axes are (angle, Doppler, range) with the range axis fastest. Bins are
/// stored in DFT order; the calibration constants give the parameter value
/// of one bin after unfolding (range bins count backwards, Doppler and angle
/// bins above half the length are negative).
struct PeriodogramGrid {
    std::array<int, 3> extents{1, 1, 1};
    std::vector<double> magnitude;
    int oversample = 1;
    double range_per_bin_m = 0.0;        // c / (2 N_r df)
    double velocity_per_bin_mps = 0.0;   // lambda / (2 N_d T_bar)
    double sine_per_bin = 0.0;           // lambda / (N_a d)

    std::size_t index(int a, int d, int r) const
    {
        return (static_cast<std::size_t>(a) * static_cast<std::size_t>(extents[1]) +
                static_cast<std::size_t>(d)) * static_cast<std::size_t>(extents[2]) +
               static_cast<std::size_t>(r);
    }
    double at(int a, int d, int r) const { return magnitude[index(a, d, r)]; }
};

/// Range-Doppler magnitude per antenna, averaged over antennas. The angle
/// axis has extent 1.
PeriodogramGrid periodogram_2d(const ObservationTensor& obs, const SystemConfig& cfg, int oversample);

/// Joint range-Doppler-angle magnitude from one 3D transform.
PeriodogramGrid periodogram_3d(const ObservationTensor& obs, const SystemConfig& cfg, int oversample);

struct DftEstimate {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double azimuth_rad = 0.0;  // NaN for the range-Doppler method
    double magnitude = 0.0;
    std::array<int, 3> bin{0, 0, 0};  // raw grid bin of the peak
};

struct DftResult {
    std::vector<DftEstimate> targets;  // sorted by range ascending
    bool shortfall = false;            // fewer than K separable peaks
};

/// Up to `k` largest local maxima of the grid (circular neighbourhoods),
/// each at least one nominal resolution cell (`oversample` bins) away from
/// every stronger accepted peak along some axis. Strongest first.
std::vector<std::array<int, 3>> find_peaks(const PeriodogramGrid& grid, std::size_t k);

/// Grid peaks are reported at the bin centre (grid-limited, the classical
/// periodogram estimator) or moved to the vertex of a 3-point parabola fitted
/// on each axis.
enum class PeakRefinement { None, Parabolic };

PeakRefinement parse_refinement(std::string_view name);  // "none" | "parabolic"

/// Parameters at a peak bin.
DftEstimate refine_peak(const PeriodogramGrid& grid, const std::array<int, 3>& bin,
                        PeakRefinement refinement = PeakRefinement::None);

inline constexpr int kDefaultOversample = 4;

DftResult dft2d_estimate(const ObservationTensor& obs, const SystemConfig& cfg, std::size_t k,
                         int oversample = kDefaultOversample,
                         PeakRefinement refinement = PeakRefinement::None);
DftResult dft3d_estimate(const ObservationTensor& obs, const SystemConfig& cfg, std::size_t k,
                         int oversample = kDefaultOversample,
                         PeakRefinement refinement = PeakRefinement::None);

} // namespace isac3d
