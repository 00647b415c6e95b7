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

#include "isac3d/estimator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isac3d {

namespace {

using Index = Eigen::Index;

// Index of element (l, n, m) in a window vector of extents (P~, M~, N~).
Index window_index(const SmoothingDims& d, std::size_t l, std::size_t n, std::size_t m)
{
    return static_cast<Index>((l * d.subcarriers + n) * d.symbols + m);
}

// Window rows (l, n, m) accepted by `keep`, in snapshot order.
template <typename Pred>
std::vector<Index> rows_where(const SmoothingDims& d, Pred keep)
{
    std::vector<Index> rows;
    for (std::size_t l = 0; l < d.antennas; ++l)
        for (std::size_t n = 0; n < d.subcarriers; ++n)
            for (std::size_t m = 0; m < d.symbols; ++m)
                if (keep(l, n, m))
                    rows.push_back(window_index(d, l, n, m));
    return rows;
}

Eigen::MatrixXcd solve_shift(const Eigen::MatrixXcd& u1, const Eigen::MatrixXcd& u2, const char* axis)
{
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    if (s.size() == 0 || s[s.size() - 1] <= 1e-10 * s[0])
        throw DegenerateGeometryError(std::string("3DJE: the ") + axis +
                                      " invariance system is rank deficient; targets are not "
                                      "resolvable with this window");
    const Eigen::VectorXd inv = s.cwiseInverse();
    return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().adjoint() * u2);
}

double offdiag_norm(const Eigen::MatrixXcd& x)
{
    Eigen::MatrixXcd y = x;
    y.diagonal().setZero();
    return y.norm();
}

} // namespace

SelectionOperators build_selection_operators(const SmoothingDims& dims)
{
    if (dims.antennas < 2)
        throw DomainError("selection operators: antenna window must be >= 2 for azimuth invariance");
    if (dims.symbols < 2)
        throw DomainError("selection operators: symbol window must be >= 2 for velocity invariance");
    if (dims.subcarriers < 2)
        throw DomainError("selection operators: subcarrier window must be >= 2 for range invariance");

    SelectionOperators ops;
    ops.dims = dims;
    const std::size_t P = dims.antennas, M = dims.symbols, N = dims.subcarriers;
    ops.range_first = rows_where(dims, [&](auto, auto n, auto) { return n + 1 < N; });
    ops.range_second = rows_where(dims, [&](auto, auto n, auto) { return n >= 1; });
    ops.velocity_first = rows_where(dims, [&](auto, auto, auto m) { return m + 1 < M; });
    ops.velocity_second = rows_where(dims, [&](auto, auto, auto m) { return m >= 1; });
    ops.azimuth_first = rows_where(dims, [&](auto l, auto, auto) { return l + 1 < P; });
    ops.azimuth_second = rows_where(dims, [&](auto l, auto, auto) { return l >= 1; });
    return ops;
}

Eigen::MatrixXcd select_rows(const Eigen::MatrixXcd& u, const std::vector<Index>& rows)
{
    Eigen::MatrixXcd out(static_cast<Index>(rows.size()), u.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Index>(i)) = u.row(rows[i]);
    return out;
}

EstimateSet estimate(const SignalSubspace& subspace, const SelectionOperators& ops,
                     const SystemConfig& cfg, std::size_t k)
{
    const auto kk = static_cast<Index>(k);
    if (k < 1 || subspace.basis.cols() != kk)
        throw PreconditionError("estimate: signal subspace must have exactly K >= 1 columns");
    if (subspace.basis.rows() != static_cast<Index>(ops.dims.snapshot_length()))
        throw PreconditionError("estimate: subspace dimension does not match the smoothing window");
    const std::size_t min_rows = std::min(
        {ops.range_first.size(), ops.velocity_first.size(), ops.azimuth_first.size()});
    if (min_rows < k)
        throw PreconditionError("estimate: K exceeds the selection-row capacity of the window");

    const Eigen::MatrixXcd& us = subspace.basis;
    const Eigen::MatrixXcd t_range =
        solve_shift(select_rows(us, ops.range_first), select_rows(us, ops.range_second), "range");
    const Eigen::MatrixXcd t_velocity = solve_shift(select_rows(us, ops.velocity_first),
                                                    select_rows(us, ops.velocity_second), "velocity");
    const Eigen::MatrixXcd t_azimuth = solve_shift(select_rows(us, ops.azimuth_first),
                                                   select_rows(us, ops.azimuth_second), "azimuth");

    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(t_range, true);
    if (ces.info() != Eigen::Success)
        throw DegenerateGeometryError("3DJE: eigendecomposition of the range operator failed");

    // Eigenvectors as columns, unit length, first nonzero entry real-positive.
    Eigen::MatrixXcd vecs = ces.eigenvectors();
    for (Index c = 0; c < kk; ++c) {
        vecs.col(c).normalize();
        for (Index r = 0; r < kk; ++r) {
            const double mag = std::abs(vecs(r, c));
            if (mag > 1e-12) {
                vecs.col(c) *= std::conj(vecs(r, c)) / mag;
                break;
            }
        }
    }

    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(vecs);
    const Eigen::MatrixXcd xi_velocity = lu.solve(t_velocity * vecs);
    const Eigen::MatrixXcd xi_azimuth = lu.solve(t_azimuth * vecs);

    EstimateSet out;
    {
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vecs);
        const Eigen::VectorXd& s = svd.singularValues();
        out.eigenvector_condition = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1]
                                                          : std::numeric_limits<double>::infinity();
    }
    out.velocity_offdiag_residue = offdiag_norm(xi_velocity);
    out.azimuth_offdiag_residue = offdiag_norm(xi_azimuth);

    const double range_scale = kSpeedOfLight / (4.0 * kPi * cfg.subcarrier_spacing_hz);
    const double velocity_scale =
        kSpeedOfLight / (4.0 * kPi * cfg.carrier_freq_hz * cfg.total_symbol_duration_s());
    const double sine_scale = cfg.wavelength_m() / (2.0 * kPi * cfg.antenna_spacing_m);

    out.targets.reserve(k);
    for (Index i = 0; i < kk; ++i) {
        PairedEstimate e;
        e.range_eigenvalue = ces.eigenvalues()[i];
        e.velocity_eigenvalue = xi_velocity(i, i);
        e.azimuth_eigenvalue = xi_azimuth(i, i);
        e.range_m = -std::arg(e.range_eigenvalue) * range_scale;
        e.velocity_mps = std::arg(e.velocity_eigenvalue) * velocity_scale;
        double sine = std::arg(e.azimuth_eigenvalue) * sine_scale;
        if (std::abs(sine) > 1.0) {
            sine = std::clamp(sine, -1.0, 1.0);
            e.azimuth_clamped = true;
        }
        e.azimuth_rad = std::asin(sine);
        out.targets.push_back(e);
    }
    std::stable_sort(out.targets.begin(), out.targets.end(),
                     [](const PairedEstimate& a, const PairedEstimate& b) { return a.range_m < b.range_m; });
    return out;
}

SignalSubspace signal_subspace(const Covariance& psi, const PipelineOptions& options)
{
    if (options.method == SubspaceMethod::Evd)
        return evd_signal_subspace(psi, options.k);
    const std::size_t d =
        options.fsd_iterations ? options.fsd_iterations : default_fsd_iterations(options.k);
    return fsd_signal_subspace(psi, options.k, std::min<std::size_t>(d, psi.psi.rows()), options.seed);
}

EstimateSet run_3dje(const ObservationTensor& obs, const SystemConfig& cfg,
                     const PipelineOptions& options)
{
    validate_dims(options.dims, obs.antennas(), obs.symbols(), obs.subcarriers());
    const SelectionOperators ops = build_selection_operators(options.dims);
    const std::size_t capacity = std::min(
        {ops.range_first.size(), ops.velocity_first.size(), ops.azimuth_first.size()});
    if (options.k < 1 || options.k > capacity || options.k >= options.dims.snapshot_length())
        throw PreconditionError("run_3dje: K=" + std::to_string(options.k) +
                                " exceeds the selection-row capacity " + std::to_string(capacity));

    const Covariance psi = smoothed_covariance(obs, options.dims);
    const SignalSubspace us = signal_subspace(psi, options);
    return estimate(us, ops, cfg, options.k);
}

} // namespace isac3d
