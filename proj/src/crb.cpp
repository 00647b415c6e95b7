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

#include "isac3d/crb.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace isac3d {

Eigen::MatrixXcd array_manifold(const SystemConfig& cfg, std::span<const Target> targets)
{
    const std::size_t P = cfg.num_rx_antennas, M = cfg.num_symbols, N = cfg.num_subcarriers;
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(P * M * N), static_cast<Eigen::Index>(targets.size()));
    for (std::size_t i = 0; i < targets.size(); ++i)
        a.col(static_cast<Eigen::Index>(i)) = array_steering_vector(derive_phases(targets[i], cfg), P, M, N);
    return a;
}

Eigen::MatrixXcd manifold_derivatives(const SystemConfig& cfg, std::span<const Target> targets)
{
    const std::size_t P = cfg.num_rx_antennas, M = cfg.num_symbols, N = cfg.num_subcarriers;
    const auto K = static_cast<Eigen::Index>(targets.size());
    const Eigen::MatrixXcd a = array_manifold(cfg, targets);
    Eigen::MatrixXcd d(a.rows(), 3 * K);
    const cdouble j{0.0, 1.0};
    for (Eigen::Index i = 0; i < K; ++i) {
        const Target& t = targets[static_cast<std::size_t>(i)];
        const double dpsi_dtheta =
            2.0 * kPi * cfg.antenna_spacing_m * std::cos(t.azimuth_rad) / cfg.wavelength_m();
        Eigen::Index idx = 0;
        for (std::size_t p = 0; p < P; ++p)
            for (std::size_t n = 0; n < N; ++n)
                for (std::size_t m = 0; m < M; ++m, ++idx) {
                    const cdouble e = a(idx, i);
                    d(idx, i) = -j * static_cast<double>(n) * e;
                    d(idx, K + i) = j * static_cast<double>(m) * e;
                    d(idx, 2 * K + i) = j * static_cast<double>(p) * dpsi_dtheta * e;
                }
    }
    return d;
}

Eigen::MatrixXcd orthogonal_projector(const Eigen::MatrixXcd& a)
{
    const Eigen::MatrixXcd gram = a.adjoint() * a;
    return Eigen::MatrixXcd::Identity(a.rows(), a.rows()) - a * gram.ldlt().solve(a.adjoint());
}

PhaseDomainCrb crb_phase_domain(const SystemConfig& cfg, std::span<const Target> targets,
                                double noise_var)
{
    if (targets.empty())
        throw PreconditionError("crb_phase_domain: need at least one target");
    if (!(noise_var >= 0.0))
        throw DomainError("crb_phase_domain: noise variance must be >= 0");
    cfg.validate();

    const auto K = static_cast<Eigen::Index>(targets.size());
    const Eigen::MatrixXcd a = array_manifold(cfg, targets);
    const Eigen::MatrixXcd abar = manifold_derivatives(cfg, targets);
    const Eigen::MatrixXcd gram = a.adjoint() * a;

    // Full column rank of A, via the eigenvalues of A^H A (squared singular values).
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(gram, Eigen::EigenvaluesOnly);
    const double s_min = std::sqrt(std::max(0.0, ges.eigenvalues()[0]));
    const double s_max = std::sqrt(ges.eigenvalues()[K - 1]);
    if (s_min < 1e-10 * s_max) {
        Eigen::Index bi = 0, bj = std::min<Eigen::Index>(1, K - 1);
        double worst = -1.0;
        for (Eigen::Index i = 0; i < K; ++i)
            for (Eigen::Index jx = i + 1; jx < K; ++jx) {
                const double coh = std::abs(gram(i, jx)) / std::sqrt(gram(i, i).real() * gram(jx, jx).real());
                if (coh > worst) {
                    worst = coh;
                    bi = i;
                    bj = jx;
                }
            }
        throw SingularityError("crb: steering matrix is rank deficient; targets " + std::to_string(bi) +
                               " and " + std::to_string(bj) + " coincide");
    }

    // P_A^perp Abar without forming the MNP x MNP projector.
    const Eigen::MatrixXcd projected = abar - a * gram.ldlt().solve(a.adjoint() * abar);
    const Eigen::MatrixXcd core = abar.adjoint() * projected;

    Eigen::MatrixXd fisher(3 * K, 3 * K);
    for (Eigen::Index r = 0; r < 3 * K; ++r)
        for (Eigen::Index s = 0; s < 3 * K; ++s) {
            const cdouble br = targets[static_cast<std::size_t>(r % K)].amplitude;
            const cdouble bs = targets[static_cast<std::size_t>(s % K)].amplitude;
            fisher(r, s) = (std::conj(br) * core(r, s) * bs).real();
        }
    fisher = (0.5 * (fisher + fisher.transpose())).eval();

    PhaseDomainCrb out;
    Eigen::LLT<Eigen::MatrixXd> llt(fisher);
    if (llt.info() != Eigen::Success) {
        out.jitter = 1e-12 * fisher.trace();
        llt.compute(fisher + out.jitter * Eigen::MatrixXd::Identity(3 * K, 3 * K));
        if (llt.info() != Eigen::Success)
            throw SingularityError("crb: Fisher information is singular");
    }
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(3 * K, 3 * K));
    inv = (0.5 * (inv + inv.transpose())).eval();
    out.matrix = (noise_var / 2.0) * inv;
    return out;
}

CrbReport crb_parameter_domain(const PhaseDomainCrb& crb, const SystemConfig& cfg,
                               std::span<const Target> targets)
{
    const auto K = static_cast<Eigen::Index>(targets.size());
    if (crb.matrix.rows() != 3 * K || crb.matrix.cols() != 3 * K)
        throw PreconditionError("crb_parameter_domain: matrix size does not match the target count");

    const double range_factor = std::pow(kSpeedOfLight / (4.0 * kPi * cfg.subcarrier_spacing_hz), 2);
    const double velocity_factor =
        std::pow(cfg.wavelength_m() / (4.0 * kPi * cfg.total_symbol_duration_s()), 2);
    const double deg_per_rad = 180.0 / kPi;

    CrbReport report;
    report.phase_domain = crb.matrix;
    report.jitter = crb.jitter;
    for (Eigen::Index i = 0; i < K; ++i) {
        TargetCrb t;
        t.crb_range_m2 = range_factor * crb.matrix(i, i);
        t.crb_velocity_mps2 = velocity_factor * crb.matrix(K + i, K + i);
        t.crb_azimuth_rad2 = crb.matrix(2 * K + i, 2 * K + i);
        t.crb_azimuth_deg2 = t.crb_azimuth_rad2 * deg_per_rad * deg_per_rad;
        t.rcrb_range_m = std::sqrt(t.crb_range_m2);
        t.rcrb_velocity_mps = std::sqrt(t.crb_velocity_mps2);
        t.rcrb_azimuth_rad = std::sqrt(t.crb_azimuth_rad2);
        t.rcrb_azimuth_deg = std::sqrt(t.crb_azimuth_deg2);
        report.targets.push_back(t);
    }
    return report;
}

} // namespace isac3d
