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

#include <Eigen/Dense>

#include <cstddef>

namespace isac3d {

/// Sub-window extents (antennas x symbols x subcarriers) used to rebuild the
/// single-snapshot observation into many overlapping snapshots.
struct SmoothingDims {
    std::size_t antennas = 7;      // P~
    std::size_t symbols = 15;      // M~
    std::size_t subcarriers = 15;  // N~

    /// N_L = P~ M~ N~
    std::size_t snapshot_length() const { return antennas * symbols * subcarriers; }
};

/// Number of snapshots N_s = (N-N~+1)(M-M~+1)(P-P~+1).
std::size_t snapshot_count(const SmoothingDims& dims, std::size_t antennas, std::size_t symbols,
                           std::size_t subcarriers);

/// Each window extent must be >= 1 and strictly smaller than the matching
/// observation extent; an axis of extent 1 only admits a window of 1.
void validate_dims(const SmoothingDims& dims, std::size_t antennas, std::size_t symbols,
                   std::size_t subcarriers);

/// Column (p~, m~, n~) sits at index (p~ (M-M~+1) + m~)(N-N~+1) + n~. Within a
/// column the symbol index is fastest, then subcarrier, then antenna.
struct SnapshotMatrix {
    SmoothingDims dims;
    Eigen::MatrixXcd g;
};

/// Hermitian sample covariance of the smoothed snapshots.
struct Covariance {
    Eigen::MatrixXcd psi;
    std::size_t snapshots = 0;
};

SnapshotMatrix smooth(const ObservationTensor& obs, const SmoothingDims& dims);

/// (1/N_s) G G^H, exactly Hermitian.
Covariance sample_covariance(const SnapshotMatrix& snap);

/// Equal to sample_covariance(smooth(obs, dims)) up to rounding, without
/// materializing the N_L x N_s snapshot matrix. Only the rows at subcarrier
/// offset 0 are accumulated over all snapshots; the rest follow from a
/// sliding-window update along the subcarrier axis. Work is split over fixed
/// tiles, so the result does not depend on the thread count.
Covariance smoothed_covariance(const ObservationTensor& obs, const SmoothingDims& dims);

/// Direct accumulation of every snapshot outer product, streamed in blocks.
Covariance smoothed_covariance_direct(const ObservationTensor& obs, const SmoothingDims& dims);

} // namespace isac3d
