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

#include "isac3d/smoothing.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>

namespace isac3d {

/// K-dimensional dominant eigenspace of the snapshot covariance.
struct SignalSubspace {
    Eigen::MatrixXcd basis;       // N_L x K, orthonormal columns
    Eigen::VectorXd eigenvalues;  // K values, descending
    /// Eigenvalues K and K+1 are equal within 1e-12 * trace.
    bool ill_separated = false;
    /// Products with the covariance performed (Lanczos path only).
    std::size_t matvecs = 0;
    std::size_t iterations = 0;
};

/// Dense Hermitian eigendecomposition; only the K+1 largest eigenpairs are
/// computed.
SignalSubspace evd_signal_subspace(const Covariance& psi, std::size_t k);

/// d = max(4K, K+2).
std::size_t default_fsd_iterations(std::size_t k);

/// y = Psi x
using HermitianOperator = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

/// Lanczos tridiagonalization with full re-orthogonalization.
///
/// q_j = r_{j-1}/b_{j-1}, a_j = q_j^H Psi q_j, r_j = Psi q_j - a_j q_j - b_{j-1} q_{j-1},
/// b_j = ||r_j||. Stops early when b_j falls below 1e-14 (relative to the
/// largest |a_j| seen), i.e. the Krylov space is invariant.
struct LanczosDecomposition {
    Eigen::MatrixXcd basis;         // n x d, columns q_1..q_d
    Eigen::MatrixXcd applied;       // n x d, columns Psi q_j
    Eigen::VectorXd alpha;          // a_1..a_d
    Eigen::VectorXd beta;           // b_1..b_d (b_d couples to the next vector)
    Eigen::VectorXcd next_residual; // r_d
    bool exhausted = false;
    std::size_t matvecs = 0;
};

LanczosDecomposition lanczos(std::size_t n, const HermitianOperator& apply, std::size_t steps,
                             std::uint64_t seed);

/// Fast subspace decomposition: d Lanczos steps, then the K leading
/// eigenvectors of G^H Psi G lifted back by G.
SignalSubspace fsd_signal_subspace(const Covariance& psi, std::size_t k, std::size_t d,
                                   std::uint64_t seed);

/// Same, for an arbitrary Hermitian operator of dimension n.
SignalSubspace fsd_signal_subspace(std::size_t n, const HermitianOperator& apply, std::size_t k,
                                   std::size_t d, std::uint64_t seed);

} // namespace isac3d
