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

#include "isac3d/baselines.hpp"

#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isac3d {

namespace {

void check_oversample(int oversample)
{
    if (oversample < 1)
        throw PreconditionError("DFT baseline: oversampling factor must be >= 1");
}

PeriodogramGrid calibrated_grid(const SystemConfig& cfg, std::array<int, 3> extents, int oversample)
{
    PeriodogramGrid grid;
    grid.extents = extents;
    grid.oversample = oversample;
    grid.range_per_bin_m = kSpeedOfLight / (2.0 * extents[2] * cfg.subcarrier_spacing_hz);
    grid.velocity_per_bin_mps = cfg.wavelength_m() / (2.0 * extents[1] * cfg.total_symbol_duration_s());
    grid.sine_per_bin = cfg.wavelength_m() / (extents[0] * cfg.antenna_spacing_m);
    grid.magnitude.assign(static_cast<std::size_t>(extents[0]) * static_cast<std::size_t>(extents[1]) *
                              static_cast<std::size_t>(extents[2]),
                          0.0);
    return grid;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

int circular_distance(int a, int b, int n)
{
    const int d = std::abs(a - b) % n;
    return std::min(d, n - d);
}

// Vertex offset of the parabola through (-1, ym), (0, y0), (1, yp).
double parabolic_offset(double ym, double y0, double yp)
{
    const double denom = ym - 2.0 * y0 + yp;
    if (!(denom < 0.0))
        return 0.0;
    return std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
}

// Fold x into [lo, lo + n).
double fold(double x, double n, double lo) { return x - n * std::floor((x - lo) / n); }

DftResult estimate_from_grid(const PeriodogramGrid& grid, std::size_t k, bool with_azimuth,
                             PeakRefinement refinement)
{
    DftResult out;
    for (const auto& bin : find_peaks(grid, k)) {
        DftEstimate e = refine_peak(grid, bin, refinement);
        if (!with_azimuth)
            e.azimuth_rad = std::numeric_limits<double>::quiet_NaN();
        out.targets.push_back(e);
    }
    out.shortfall = out.targets.size() < k;
    std::stable_sort(out.targets.begin(), out.targets.end(),
                     [](const DftEstimate& a, const DftEstimate& b) { return a.range_m < b.range_m; });
    return out;
}

} // namespace

PeriodogramGrid periodogram_2d(const ObservationTensor& obs, const SystemConfig& cfg, int oversample)
{
    check_oversample(oversample);
    const int nd = oversample * static_cast<int>(obs.symbols());
    const int nr = oversample * static_cast<int>(obs.subcarriers());
    PeriodogramGrid grid = calibrated_grid(cfg, {1, nd, nr}, oversample);

    std::vector<cdouble> buf(static_cast<std::size_t>(nd) * static_cast<std::size_t>(nr));
    const std::array<int, 2> extents{nd, nr};
    const double inv_p = 1.0 / static_cast<double>(obs.antennas());
    for (std::size_t p = 0; p < obs.antennas(); ++p) {
        std::fill(buf.begin(), buf.end(), cdouble{});
        for (std::size_t m = 0; m < obs.symbols(); ++m)
            for (std::size_t n = 0; n < obs.subcarriers(); ++n)
                buf[m * static_cast<std::size_t>(nr) + n] = obs.at(p, m, n);
        detail::fft_forward(buf, extents);
        for (std::size_t i = 0; i < buf.size(); ++i)
            grid.magnitude[i] += std::abs(buf[i]) * inv_p;
    }
    return grid;
}

PeriodogramGrid periodogram_3d(const ObservationTensor& obs, const SystemConfig& cfg, int oversample)
{
    check_oversample(oversample);
    const int na = oversample * static_cast<int>(obs.antennas());
    const int nd = oversample * static_cast<int>(obs.symbols());
    const int nr = oversample * static_cast<int>(obs.subcarriers());
    PeriodogramGrid grid = calibrated_grid(cfg, {na, nd, nr}, oversample);

    std::vector<cdouble> buf(grid.magnitude.size());
    for (std::size_t p = 0; p < obs.antennas(); ++p)
        for (std::size_t m = 0; m < obs.symbols(); ++m)
            for (std::size_t n = 0; n < obs.subcarriers(); ++n)
                buf[grid.index(static_cast<int>(p), static_cast<int>(m), static_cast<int>(n))] =
                    obs.at(p, m, n);
    const std::array<int, 3> extents{na, nd, nr};
    detail::fft_forward(buf, extents);
    for (std::size_t i = 0; i < buf.size(); ++i)
        grid.magnitude[i] = std::abs(buf[i]);
    return grid;
}

std::vector<std::array<int, 3>> find_peaks(const PeriodogramGrid& grid, std::size_t k)
{
    const auto [na, nd, nr] = grid.extents;
    const int ra = na > 1 ? 1 : 0, rd = nd > 1 ? 1 : 0, rr = nr > 1 ? 1 : 0;

    std::vector<std::size_t> candidates;
    for (int a = 0; a < na; ++a)
        for (int d = 0; d < nd; ++d)
            for (int r = 0; r < nr; ++r) {
                const double v = grid.at(a, d, r);
                bool is_max = v > 0.0;
                // Cheap rejection along the contiguous range axis first.
                if (is_max && rr && (grid.at(a, d, wrap(r - 1, nr)) > v || grid.at(a, d, wrap(r + 1, nr)) > v))
                    continue;
                for (int da = -ra; da <= ra && is_max; ++da)
                    for (int dd = -rd; dd <= rd && is_max; ++dd)
                        for (int dr = -rr; dr <= rr && is_max; ++dr) {
                            if (da == 0 && dd == 0 && dr == 0)
                                continue;
                            if (grid.at(wrap(a + da, na), wrap(d + dd, nd), wrap(r + dr, nr)) > v)
                                is_max = false;
                        }
                if (is_max)
                    candidates.push_back(grid.index(a, d, r));
            }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t x, std::size_t y) {
        return grid.magnitude[x] > grid.magnitude[y];
    });

    const int cell = grid.oversample;
    std::vector<std::array<int, 3>> peaks;
    for (std::size_t idx : candidates) {
        if (peaks.size() == k)
            break;
        const int r = static_cast<int>(idx % static_cast<std::size_t>(nr));
        const int d = static_cast<int>((idx / static_cast<std::size_t>(nr)) % static_cast<std::size_t>(nd));
        const int a = static_cast<int>(idx / (static_cast<std::size_t>(nr) * static_cast<std::size_t>(nd)));
        const bool separated = std::all_of(peaks.begin(), peaks.end(), [&](const auto& q) {
            return circular_distance(a, q[0], na) >= cell || circular_distance(d, q[1], nd) >= cell ||
                   circular_distance(r, q[2], nr) >= cell;
        });
        if (separated)
            peaks.push_back({a, d, r});
    }
    return peaks;
}

PeakRefinement parse_refinement(std::string_view name)
{
    if (name == "none")
        return PeakRefinement::None;
    if (name == "parabolic")
        return PeakRefinement::Parabolic;
    throw PreconditionError("unknown peak refinement '" + std::string(name) + "' (none or parabolic)");
}

DftEstimate refine_peak(const PeriodogramGrid& grid, const std::array<int, 3>& bin,
                        PeakRefinement refinement)
{
    const auto [na, nd, nr] = grid.extents;
    const auto [a, d, r] = bin;
    const double y0 = grid.at(a, d, r);
    const auto offset = [&](int axis, int n) {
        if (refinement == PeakRefinement::None || n < 3)
            return 0.0;
        std::array<int, 3> lo = bin, hi = bin;
        lo[axis] = wrap(bin[axis] - 1, n);
        hi[axis] = wrap(bin[axis] + 1, n);
        return parabolic_offset(grid.at(lo[0], lo[1], lo[2]), y0, grid.at(hi[0], hi[1], hi[2]));
    };

    DftEstimate e;
    e.bin = bin;
    e.magnitude = y0;
    // A positive range phase shows up at negative DFT frequency.
    const double range_bin = fold(-(r + offset(2, nr)), nr, -0.5);
    const double doppler_bin = fold(d + offset(1, nd), nd, -0.5 * nd);
    const double angle_bin = fold(a + offset(0, na), na, -0.5 * na);
    e.range_m = range_bin * grid.range_per_bin_m;
    e.velocity_mps = doppler_bin * grid.velocity_per_bin_mps;
    e.azimuth_rad = std::asin(std::clamp(angle_bin * grid.sine_per_bin, -1.0, 1.0));
    return e;
}

DftResult dft2d_estimate(const ObservationTensor& obs, const SystemConfig& cfg, std::size_t k,
                         int oversample, PeakRefinement refinement)
{
    if (k < 1)
        throw PreconditionError("dft2d_estimate: K must be >= 1");
    return estimate_from_grid(periodogram_2d(obs, cfg, oversample), k, false, refinement);
}

DftResult dft3d_estimate(const ObservationTensor& obs, const SystemConfig& cfg, std::size_t k,
                         int oversample, PeakRefinement refinement)
{
    if (k < 1)
        throw PreconditionError("dft3d_estimate: K must be >= 1");
    return estimate_from_grid(periodogram_3d(obs, cfg, oversample), k, true, refinement);
}

} // namespace isac3d
