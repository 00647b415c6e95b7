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

#include "isac3d/smoothing.hpp"

#include "isac3d/kernels.hpp"

#include <algorithm>
#include <string>

namespace isac3d {

namespace {

constexpr std::size_t kSnapshotBlock = 512;

void check_axis(const char* axis, std::size_t window, std::size_t extent)
{
    const bool ok = window >= 1 && (extent == 1 ? window == 1 : window < extent);
    if (!ok)
        throw DomainError(std::string("smoothing window along the ") + axis + " axis is " +
                          std::to_string(window) + " but must lie in [1, " +
                          std::to_string(extent) + ")");
}

Covariance finalize(Eigen::MatrixXcd lower, std::size_t snapshots)
{
    lower /= static_cast<double>(snapshots);
    const Eigen::Index n = lower.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        lower(j, j) = cdouble(lower(j, j).real(), 0.0);
        for (Eigen::Index i = 0; i < j; ++i)
            lower(i, j) = std::conj(lower(j, i));
    }
    return {std::move(lower), snapshots};
}

} // namespace

std::size_t snapshot_count(const SmoothingDims& dims, std::size_t antennas, std::size_t symbols,
                           std::size_t subcarriers)
{
    validate_dims(dims, antennas, symbols, subcarriers);
    return (subcarriers - dims.subcarriers + 1) * (symbols - dims.symbols + 1) *
           (antennas - dims.antennas + 1);
}

void validate_dims(const SmoothingDims& dims, std::size_t antennas, std::size_t symbols,
                   std::size_t subcarriers)
{
    check_axis("antenna", dims.antennas, antennas);
    check_axis("symbol", dims.symbols, symbols);
    check_axis("subcarrier", dims.subcarriers, subcarriers);
}

SnapshotMatrix smooth(const ObservationTensor& obs, const SmoothingDims& dims)
{
    const std::size_t ns = snapshot_count(dims, obs.antennas(), obs.symbols(), obs.subcarriers());
    SnapshotMatrix snap{dims, Eigen::MatrixXcd(static_cast<Eigen::Index>(dims.snapshot_length()),
                                               static_cast<Eigen::Index>(ns))};
    kernels::gather_snapshots(obs, dims, 0, snap.g);
    return snap;
}

Covariance sample_covariance(const SnapshotMatrix& snap)
{
    const Eigen::Index nl = snap.g.rows();
    const Eigen::Index ns = snap.g.cols();
    if (ns < 1)
        throw PreconditionError("sample_covariance: need at least one snapshot");
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(nl, nl);
    for (Eigen::Index c0 = 0; c0 < ns; c0 += static_cast<Eigen::Index>(kSnapshotBlock)) {
        const Eigen::Index w = std::min<Eigen::Index>(kSnapshotBlock, ns - c0);
        kernels::hermitian_rank_update(acc, snap.g.middleCols(c0, w));
    }
    return finalize(std::move(acc), static_cast<std::size_t>(ns));
}

Covariance smoothed_covariance_direct(const ObservationTensor& obs, const SmoothingDims& dims)
{
    const std::size_t ns = snapshot_count(dims, obs.antennas(), obs.symbols(), obs.subcarriers());
    const auto nl = static_cast<Eigen::Index>(dims.snapshot_length());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(nl, nl);
    Eigen::MatrixXcd block;
    for (std::size_t c0 = 0; c0 < ns; c0 += kSnapshotBlock) {
        const std::size_t w = std::min(kSnapshotBlock, ns - c0);
        block.resize(nl, static_cast<Eigen::Index>(w));
        kernels::gather_snapshots(obs, dims, c0, block);
        kernels::hermitian_rank_update(acc, block);
    }
    return finalize(std::move(acc), ns);
}

// Moving every window one subcarrier further changes the entry for
// subcarrier offsets (n, n') only by the two edge terms:
//   F(n, n') = F(n-1, n'-1) - C(n-1, n'-1) + C(n-1+N_c, n'-1+N_c),
//   C(a, b)[q, q'] = sum_{p~, m~} z(p~+l, m~+m, a) conj(z(p~+l', m~+m', b)),
// where q = (l, m) and N_c is the number of window positions along the
// subcarrier axis. Rows with n = 0 are computed directly.
Covariance smoothed_covariance(const ObservationTensor& obs, const SmoothingDims& dims)
{
    using Index = Eigen::Index;
    const std::size_t ns = snapshot_count(dims, obs.antennas(), obs.symbols(), obs.subcarriers());
    const std::size_t pw = dims.antennas, mw = dims.symbols, nw = dims.subcarriers;
    const std::size_t pc = obs.antennas() - pw + 1, mc = obs.symbols() - mw + 1;
    const std::size_t nc = obs.subcarriers() - nw + 1;
    const auto lw = static_cast<Index>(pw * mw);
    const auto nl = static_cast<Index>(dims.snapshot_length());
    const auto row_of = [&](Index q, std::size_t n) {
        const auto l = static_cast<std::size_t>(q) / mw, m = static_cast<std::size_t>(q) % mw;
        return static_cast<Index>((l * nw + n) * mw + m);
    };

    // Boundary rows (n = 0) against all rows, streamed over snapshot blocks.
    Eigen::MatrixXcd boundary = Eigen::MatrixXcd::Zero(lw, nl);
    Eigen::MatrixXcd block, head;
    const Index tiles = (nl + kernels::kCovarianceTile - 1) / kernels::kCovarianceTile;
    for (std::size_t c0 = 0; c0 < ns; c0 += kSnapshotBlock) {
        const std::size_t w = std::min(kSnapshotBlock, ns - c0);
        block.resize(nl, static_cast<Index>(w));
        kernels::gather_snapshots(obs, dims, c0, block);
        head.resize(lw, block.cols());
        for (Index q = 0; q < lw; ++q)
            head.row(q) = block.row(row_of(q, 0));
#pragma omp parallel for schedule(static)
        for (Index t = 0; t < tiles; ++t) {
            const Index c = t * kernels::kCovarianceTile;
            const Index h = std::min(kernels::kCovarianceTile, nl - c);
            boundary.middleCols(c, h).noalias() += head * block.middleRows(c, h).adjoint();
        }
    }

    Eigen::MatrixXcd psi(nl, nl);
    for (Index q = 0; q < lw; ++q) {
        const Index r = row_of(q, 0);
        for (Index c = 0; c < nl; ++c) {
            psi(r, c) = boundary(q, c);
            psi(c, r) = std::conj(boundary(q, c));
        }
    }

    if (nw > 1) {
        // Edge vectors for subcarriers a = 0..nw-2 (leaving) and nc..nc+nw-2 (entering).
        const auto edges = [&](std::size_t first) {
            Eigen::MatrixXcd y(static_cast<Index>(nw - 1) * lw, static_cast<Index>(pc * mc));
            for (std::size_t a = 0; a + 1 < nw; ++a)
                for (Index q = 0; q < lw; ++q) {
                    const auto l = static_cast<std::size_t>(q) / mw, m = static_cast<std::size_t>(q) % mw;
                    const Index r = static_cast<Index>(a) * lw + q;
                    for (std::size_t p = 0; p < pc; ++p)
                        for (std::size_t mm = 0; mm < mc; ++mm)
                            y(r, static_cast<Index>(p * mc + mm)) = obs.at(p + l, mm + m, first + a);
                }
            return y;
        };
        const Eigen::MatrixXcd leaving = edges(0);
        const Eigen::MatrixXcd entering = edges(nc);
        Eigen::MatrixXcd delta(leaving.rows(), leaving.rows());
        delta.noalias() = entering * entering.adjoint();
        delta.noalias() -= leaving * leaving.adjoint();

        for (std::size_t n = 1; n < nw; ++n) {
#pragma omp parallel for schedule(static)
            for (std::size_t n2 = 1; n2 < nw; ++n2)
                for (Index q2 = 0; q2 < lw; ++q2) {
                    const Index c = row_of(q2, n2), c_prev = row_of(q2, n2 - 1);
                    const Index dc = static_cast<Index>(n2 - 1) * lw + q2;
                    for (Index q = 0; q < lw; ++q)
                        psi(row_of(q, n), c) = psi(row_of(q, n - 1), c_prev) +
                                               delta(static_cast<Index>(n - 1) * lw + q, dc);
                }
        }
    }
    return finalize(std::move(psi), ns);
}

} // namespace isac3d
