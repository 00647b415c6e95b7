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

#include "isac3d/subspace.hpp"

#include "isac3d/kernels.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>
#include <vector>

namespace isac3d {

SignalSubspace evd_signal_subspace(const Covariance& psi, std::size_t k)
{
    const auto n = static_cast<lapack_int>(psi.psi.rows());
    if (psi.psi.rows() != psi.psi.cols())
        throw PreconditionError("evd_signal_subspace: covariance must be square");
    if (k < 1 || static_cast<lapack_int>(k) >= n)
        throw PreconditionError("evd_signal_subspace: need 1 <= K < N_L");

    const auto wanted = static_cast<lapack_int>(k + 1);
    Eigen::MatrixXcd a = psi.psi;  // destroyed by LAPACK
    Eigen::VectorXd w(n);
    Eigen::MatrixXcd z(n, wanted);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(wanted));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
        0.0, 0.0, n - wanted + 1, n, 0.0, &found, w.data(),
        reinterpret_cast<lapack_complex_double*>(z.data()), n, support.data());
    if (info != 0 || found != wanted)
        throw std::runtime_error("evd_signal_subspace: zheevr failed (info=" + std::to_string(info) + ")");

    // Ascending order from LAPACK: w[0] is the (K+1)-th largest eigenvalue.
    SignalSubspace out;
    out.basis.resize(n, static_cast<Eigen::Index>(k));
    out.eigenvalues.resize(static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i) {
        out.basis.col(i) = z.col(wanted - 1 - i);
        out.eigenvalues[i] = w[wanted - 1 - i];
    }
    const double trace = psi.psi.diagonal().real().sum();
    out.ill_separated = (w[1] - w[0]) <= 1e-12 * std::abs(trace);
    return out;
}

std::size_t default_fsd_iterations(std::size_t k) { return std::max(4 * k, k + 2); }

LanczosDecomposition lanczos(std::size_t n, const HermitianOperator& apply, std::size_t steps,
                             std::uint64_t seed)
{
    const auto dim = static_cast<Eigen::Index>(n);
    const auto d = static_cast<Eigen::Index>(steps);
    LanczosDecomposition dec;
    dec.basis.resize(dim, d);
    dec.applied.resize(dim, d);
    dec.alpha.resize(d);
    dec.beta.resize(d);

    Rng rng(seed);
    Eigen::VectorXcd r(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        r[i] = complex_gaussian(rng, 1.0);
    r /= r.norm();

    double b_prev = 1.0;
    Eigen::VectorXcd q_prev = Eigen::VectorXcd::Zero(dim);
    Eigen::VectorXcd w(dim);
    double scale = 0.0;
    Eigen::Index j = 0;
    for (; j < d; ++j) {
        const Eigen::VectorXcd q = r / b_prev;
        apply(q, w);
        ++dec.matvecs;
        const double a = q.dot(w).real();  // dot() conjugates the left operand
        r = w - a * q - b_prev * q_prev;

        dec.basis.col(j) = q;
        dec.applied.col(j) = w;
        // Two passes of classical Gram-Schmidt against every stored vector.
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXcd h = dec.basis.leftCols(j + 1).adjoint() * r;
            r.noalias() -= dec.basis.leftCols(j + 1) * h;
        }
        const double b = r.norm();
        dec.alpha[j] = a;
        dec.beta[j] = b;
        scale = std::max(scale, w.norm());
        q_prev = q;
        b_prev = b;
        if (b <= 1e-14 * scale) {
            dec.exhausted = true;
            ++j;
            break;
        }
    }
    dec.basis.conservativeResize(dim, j);
    dec.applied.conservativeResize(dim, j);
    dec.alpha.conservativeResize(j);
    dec.beta.conservativeResize(j);
    dec.next_residual = r;
    return dec;
}

SignalSubspace fsd_signal_subspace(std::size_t n, const HermitianOperator& apply, std::size_t k,
                                   std::size_t d, std::uint64_t seed)
{
    if (k < 1 || k > d || d > n)
        throw PreconditionError("fsd_signal_subspace: need 1 <= K <= d <= N_L");

    const LanczosDecomposition dec = lanczos(n, apply, d, seed);
    const auto done = dec.basis.cols();
    if (static_cast<std::size_t>(done) < k)
        throw std::runtime_error("fsd_signal_subspace: Krylov space exhausted after " +
                                 std::to_string(done) + " steps, fewer than K");

    Eigen::MatrixXcd projected = dec.basis.adjoint() * dec.applied;
    projected = (0.5 * (projected + projected.adjoint())).eval();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(projected);

    const auto kk = static_cast<Eigen::Index>(k);
    SignalSubspace out;
    out.basis.resize(static_cast<Eigen::Index>(n), kk);
    out.eigenvalues.resize(kk);
    for (Eigen::Index i = 0; i < kk; ++i) {
        const Eigen::Index src = done - 1 - i;  // ascending order from Eigen
        out.basis.col(i) = dec.basis * es.eigenvectors().col(src);
        out.eigenvalues[i] = es.eigenvalues()[src];
    }
    if (done > kk) {
        const double gap = es.eigenvalues()[done - kk] - es.eigenvalues()[done - kk - 1];
        out.ill_separated = gap <= 1e-12 * std::abs(es.eigenvalues().sum());
    }
    out.matvecs = dec.matvecs;
    out.iterations = static_cast<std::size_t>(done);
    return out;
}

SignalSubspace fsd_signal_subspace(const Covariance& psi, std::size_t k, std::size_t d,
                                   std::uint64_t seed)
{
    const HermitianOperator apply = [&psi](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
        kernels::matvec(psi.psi, x, y);
    };
    return fsd_signal_subspace(static_cast<std::size_t>(psi.psi.rows()), apply, k, d, seed);
}

} // namespace isac3d
