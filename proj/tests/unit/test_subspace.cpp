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

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace isac3d;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    Rng rng(seed);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m(i) = complex_gaussian(rng, 1.0);
    return m;
}

Covariance as_covariance(const Eigen::MatrixXcd& m)
{
    return {0.5 * (m + m.adjoint()), 1};
}

// Top-k eigenvectors from Eigen's dense solver.
Eigen::MatrixXcd oracle_subspace(const Eigen::MatrixXcd& h, Eigen::Index k)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    return es.eigenvectors().rightCols(k);
}

double orthonormality_error(const Eigen::MatrixXcd& u)
{
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("EVD of a diagonal covariance", "[evd]")
{
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
    h.diagonal() << 3.0, 2.0, 1.0;
    const SignalSubspace s = evd_signal_subspace(as_covariance(h), 2);
    CHECK_THAT(s.eigenvalues[0], WithinAbs(3.0, 1e-14));
    CHECK_THAT(s.eigenvalues[1], WithinAbs(2.0, 1e-14));
    CHECK_THAT(std::abs(s.basis(0, 0)), WithinAbs(1.0, 1e-14));
    CHECK_THAT(std::abs(s.basis(1, 1)), WithinAbs(1.0, 1e-14));
    CHECK_FALSE(s.ill_separated);
}

TEST_CASE("EVD of a rank-one covariance", "[evd]")
{
    const Eigen::VectorXcd a = random_matrix(12, 1, 3).col(0).normalized();
    const SignalSubspace s = evd_signal_subspace(as_covariance(a * a.adjoint()), 1);
    CHECK_THAT(std::abs(a.dot(s.basis.col(0))), WithinAbs(1.0, 1e-12));
    CHECK_THAT(s.eigenvalues[0], WithinAbs(1.0, 1e-12));
}

TEST_CASE("EVD agrees with an independent dense eigensolver", "[evd]")
{
    const Eigen::MatrixXcd x = random_matrix(50, 80, 4);
    const Eigen::MatrixXcd h = x * x.adjoint() / 80.0;
    const SignalSubspace s = evd_signal_subspace(as_covariance(h), 5);
    CHECK(oracle::max_principal_angle(s.basis, oracle_subspace(h, 5)) < 1e-8);
    CHECK(orthonormality_error(s.basis) < 1e-10);
    for (Eigen::Index i = 1; i < 5; ++i)
        CHECK(s.eigenvalues[i - 1] >= s.eigenvalues[i]);
}

TEST_CASE("EVD flags equal boundary eigenvalues", "[evd]")
{
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
    h.diagonal() << 5.0, 2.0, 2.0, 1.0;
    CHECK(evd_signal_subspace(as_covariance(h), 2).ill_separated);
    CHECK_FALSE(evd_signal_subspace(as_covariance(h), 1).ill_separated);
    CHECK_THROWS_AS(evd_signal_subspace(as_covariance(h), 4), PreconditionError);
    CHECK_THROWS_AS(evd_signal_subspace(as_covariance(h), 0), PreconditionError);
}

TEST_CASE("Lanczos recurrence with full re-orthogonalization", "[lanczos]")
{
    const Eigen::MatrixXcd x = random_matrix(60, 90, 5);
    const Covariance c = as_covariance(x * x.adjoint() / 90.0);
    const HermitianOperator apply = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& y) { y = c.psi * v; };
    const LanczosDecomposition dec = lanczos(60, apply, 20, 1);
    REQUIRE(dec.basis.cols() == 20);
    CHECK(dec.matvecs == 20);
    CHECK(orthonormality_error(dec.basis) < 1e-12);

    // Psi Q - Q T - b_d r_d e_d^T / b_d
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(20, 20);
    for (Eigen::Index j = 0; j < 20; ++j) {
        t(j, j) = dec.alpha[j];
        if (j + 1 < 20)
            t(j + 1, j) = t(j, j + 1) = dec.beta[j];
    }
    Eigen::MatrixXcd resid = c.psi * dec.basis - dec.basis * t.cast<cdouble>();
    resid.col(19) -= dec.next_residual;
    const double norm = c.psi.operatorNorm();
    CHECK(resid.norm() < 1e-8 * norm);

    // The projected matrix is tridiagonal.
    const Eigen::MatrixXcd projected = dec.basis.adjoint() * c.psi * dec.basis;
    CHECK((projected - t.cast<cdouble>()).cwiseAbs().maxCoeff() < 1e-10 * norm);
}

TEST_CASE("FSD on an exact-rank covariance", "[fsd]")
{
    const Eigen::MatrixXcd x = random_matrix(40, 3, 6);
    const Eigen::MatrixXcd h = x * x.adjoint();
    // The start vector has a null-space component, so one extra step is
    // needed before the Krylov space contains the whole range.
    const SignalSubspace s = fsd_signal_subspace(as_covariance(h), 3, 4, 2);
    CHECK(oracle::max_principal_angle(s.basis, oracle_subspace(h, 3)) < 1e-8);
    CHECK(orthonormality_error(s.basis) < 1e-10);
}

TEST_CASE("FSD with a full Krylov space equals the EVD", "[fsd]")
{
    const Eigen::MatrixXcd x = random_matrix(30, 50, 7);
    const Covariance c = as_covariance(x * x.adjoint() / 50.0);
    const SignalSubspace f = fsd_signal_subspace(c, 4, 30, 3);
    const SignalSubspace e = evd_signal_subspace(c, 4);
    CHECK(oracle::max_principal_angle(f.basis, e.basis) < 1e-8);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK_THAT(f.eigenvalues[i], WithinRel(e.eigenvalues[i], 1e-10));
}

TEST_CASE("FSD touches the covariance only through d products", "[fsd]")
{
    const Eigen::MatrixXcd x = random_matrix(80, 100, 8);
    const Eigen::MatrixXcd h = x * x.adjoint() / 100.0;
    std::size_t calls = 0;
    const HermitianOperator apply = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& y) {
        ++calls;
        y = h * v;
    };
    const SignalSubspace s = fsd_signal_subspace(80, apply, 2, 9, 4);
    CHECK(calls == 9);
    CHECK(s.matvecs == 9);
    CHECK(s.iterations == 9);
}

TEST_CASE("FSD stops early on an invariant Krylov space", "[fsd]")
{
    const Eigen::MatrixXcd x = random_matrix(20, 2, 9);
    const Covariance c = as_covariance(x * x.adjoint());
    const SignalSubspace s = fsd_signal_subspace(c, 2, 10, 5);
    CHECK(s.iterations <= 4);
    CHECK(oracle::max_principal_angle(s.basis, oracle_subspace(c.psi, 2)) < 1e-8);

    // A rank-one operator exhausts the Krylov space before three vectors exist.
    const Eigen::VectorXcd a = Eigen::VectorXcd::Ones(20);
    const Covariance one = as_covariance(a * a.adjoint());
    CHECK_THROWS_AS(fsd_signal_subspace(one, 3, 10, 5), std::runtime_error);
}

TEST_CASE("FSD preconditions", "[fsd]")
{
    const Covariance c = as_covariance(Eigen::MatrixXcd::Identity(5, 5));
    CHECK_THROWS_AS(fsd_signal_subspace(c, 3, 2, 1), PreconditionError);
    CHECK_THROWS_AS(fsd_signal_subspace(c, 1, 6, 1), PreconditionError);
    CHECK_THROWS_AS(fsd_signal_subspace(c, 0, 2, 1), PreconditionError);
    CHECK(default_fsd_iterations(1) == 4);
    CHECK(default_fsd_iterations(3) == 12);
}

TEST_CASE("FSD and EVD agree on smoothed trial covariances", "[fsd][property]")
{
    const SystemConfig cfg = preset("nr120-desk");
    const SmoothingDims dims{4, 8, 8};
    for (double snr : {-5.0, 0.0, 5.0}) {
        for (std::uint64_t trial = 0; trial < 3; ++trial) {
            std::vector<Target> targets{{35.0, 15.0, deg2rad(20.0)}};
            Rng rng(derive_seed(31, trial));
            targets[0].amplitude = std::polar(1.0, std::uniform_real_distribution<double>(-kPi, kPi)(rng));
            const ObservationTensor obs =
                synthesize_observation(cfg, targets, std::pow(10.0, -snr / 10.0), derive_seed(17, trial));
            const Covariance psi = smoothed_covariance(obs, dims);
            const SignalSubspace e = evd_signal_subspace(psi, 1);
            const SignalSubspace f = fsd_signal_subspace(psi, 1, default_fsd_iterations(1), trial);
            INFO("snr " << snr << " trial " << trial);
            CHECK(oracle::max_principal_angle(e.basis, f.basis) < 1e-3);
            CHECK(orthonormality_error(f.basis) < 1e-10);
        }
    }
}
