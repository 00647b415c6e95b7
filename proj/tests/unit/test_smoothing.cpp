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

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace isac3d;
using Catch::Matchers::WithinAbs;

namespace {

ObservationTensor random_tensor(std::size_t P, std::size_t M, std::size_t N, std::uint64_t seed)
{
    ObservationTensor obs(P, M, N, 1.0);
    Rng rng(seed);
    for (cdouble& z : obs.data())
        z = complex_gaussian(rng, 1.0);
    return obs;
}

// Snapshot matrix written straight from the window definition.
Eigen::MatrixXcd brute_force_windows(const ObservationTensor& obs, const SmoothingDims& d)
{
    const std::size_t Pc = obs.antennas() - d.antennas + 1;
    const std::size_t Mc = obs.symbols() - d.symbols + 1;
    const std::size_t Nc = obs.subcarriers() - d.subcarriers + 1;
    Eigen::MatrixXcd g(static_cast<Eigen::Index>(d.snapshot_length()), static_cast<Eigen::Index>(Pc * Mc * Nc));
    for (std::size_t pp = 0; pp < Pc; ++pp)
        for (std::size_t mm = 0; mm < Mc; ++mm)
            for (std::size_t nn = 0; nn < Nc; ++nn) {
                const auto col = static_cast<Eigen::Index>((pp * Mc + mm) * Nc + nn);
                for (std::size_t l = 0; l < d.antennas; ++l)
                    for (std::size_t n = 0; n < d.subcarriers; ++n)
                        for (std::size_t m = 0; m < d.symbols; ++m) {
                            const auto row = static_cast<Eigen::Index>((l * d.subcarriers + n) * d.symbols + m);
                            g(row, col) = obs.at(pp + l, mm + m, nn + n);
                        }
            }
    return g;
}

std::vector<double> descending_eigenvalues(const Eigen::MatrixXcd& h)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

std::size_t numerical_rank(const Eigen::MatrixXcd& h)
{
    const std::vector<double> ev = descending_eigenvalues(h);
    return static_cast<std::size_t>(
        std::count_if(ev.begin(), ev.end(), [&](double x) { return x > 1e-8 * ev.front(); }));
}

} // namespace

TEST_CASE("snapshot count and window validation", "[smoothing]")
{
    CHECK(snapshot_count({7, 15, 15}, 8, 112, 120) == 20776);
    CHECK(SmoothingDims{7, 15, 15}.snapshot_length() == 1575);

    CHECK_NOTHROW(validate_dims({1, 1, 1}, 2, 2, 2));
    CHECK_NOTHROW(validate_dims({1, 3, 3}, 1, 8, 8));
    CHECK_THROWS_AS(validate_dims({2, 3, 3}, 2, 8, 8), DomainError);
    CHECK_THROWS_AS(validate_dims({1, 8, 3}, 2, 8, 8), DomainError);
    CHECK_THROWS_AS(validate_dims({1, 3, 0}, 2, 8, 8), DomainError);
    CHECK_THROWS_AS(smooth(random_tensor(2, 4, 4, 1), {2, 2, 2}), DomainError);
}

TEST_CASE("degenerate window enumerates the tensor", "[smoothing]")
{
    const ObservationTensor obs = random_tensor(2, 2, 2, 3);
    const SnapshotMatrix s = smooth(obs, {1, 1, 1});
    REQUIRE(s.g.rows() == 1);
    REQUIRE(s.g.cols() == 8);
    for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t m = 0; m < 2; ++m)
            for (std::size_t n = 0; n < 2; ++n)
                CHECK(s.g(0, static_cast<Eigen::Index>((p * 2 + m) * 2 + n)) == obs.at(p, m, n));
}

TEST_CASE("snapshot columns are the sliding windows", "[smoothing]")
{
    const ObservationTensor obs = random_tensor(4, 9, 11, 5);
    for (const SmoothingDims d : {SmoothingDims{2, 3, 4}, SmoothingDims{3, 5, 2}, SmoothingDims{1, 8, 10}}) {
        const SnapshotMatrix s = smooth(obs, d);
        const Eigen::MatrixXcd ref = brute_force_windows(obs, d);
        REQUIRE(s.g.rows() == ref.rows());
        REQUIRE(s.g.cols() == ref.cols());
        CHECK(s.g == ref);
    }
}

TEST_CASE("covariance paths agree", "[smoothing][covariance]")
{
    const ObservationTensor obs = random_tensor(5, 13, 17, 7);
    for (const SmoothingDims d : {SmoothingDims{3, 4, 5}, SmoothingDims{2, 6, 3}, SmoothingDims{4, 2, 9}}) {
        const Covariance ref = sample_covariance(smooth(obs, d));
        const Covariance slide = smoothed_covariance(obs, d);
        const Covariance direct = smoothed_covariance_direct(obs, d);
        const double scale = ref.psi.cwiseAbs().maxCoeff();
        CHECK(slide.snapshots == ref.snapshots);
        CHECK(direct.snapshots == ref.snapshots);
        CHECK((slide.psi - ref.psi).cwiseAbs().maxCoeff() < 1e-12 * scale);
        CHECK((direct.psi - ref.psi).cwiseAbs().maxCoeff() < 1e-12 * scale);

        const Eigen::MatrixXcd g = brute_force_windows(obs, d);
        const Eigen::MatrixXcd outer = g * g.adjoint() / static_cast<double>(g.cols());
        CHECK((slide.psi - outer).cwiseAbs().maxCoeff() < 1e-12 * scale);

        // Exact Hermitian symmetry and PSD.
        CHECK(slide.psi == Eigen::MatrixXcd(slide.psi.adjoint()));
        CHECK(ref.psi == Eigen::MatrixXcd(ref.psi.adjoint()));
        const std::vector<double> ev = descending_eigenvalues(slide.psi);
        const double trace = slide.psi.trace().real();
        CHECK(ev.back() >= -1e-10 * trace / static_cast<double>(ev.size()));
    }
}

TEST_CASE("single snapshot covariance is the outer product", "[smoothing][covariance]")
{
    SnapshotMatrix s;
    s.g = Eigen::MatrixXcd::Random(6, 1);
    const Covariance c = sample_covariance(s);
    CHECK((c.psi - s.g * s.g.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(numerical_rank(c.psi) == 1);
}

TEST_CASE("noiseless smoothing decoheres the targets", "[smoothing][rank]")
{
    const SystemConfig cfg = preset("nr120-desk");
    std::vector<Target> targets{{35.0, 15.0, deg2rad(20.0)}, {60.0, 10.0, deg2rad(-20.0)},
                                {80.0, -10.0, deg2rad(50.0)}};
    targets[1].amplitude = {0.0, 1.0};
    targets[2].amplitude = {-0.6, 0.8};

    const ObservationTensor one = synthesize_observation(cfg, std::span(targets).first(1), 0.0, 1);
    const SnapshotMatrix g1 = smooth(one, {3, 4, 4});
    CHECK(numerical_rank(sample_covariance(g1).psi) == 1);
    // Every column is a multiple of the window steering vector.
    const PhaseTriple ph = derive_phases(targets[0], cfg);
    const Eigen::VectorXcd a = array_steering_vector(ph, 3, 4, 4).normalized();
    const Eigen::MatrixXcd resid = g1.g - a * (a.adjoint() * g1.g);
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-12);

    // Shift identity on the K=1 columns.
    const std::size_t Mc = 32 - 4 + 1, Nc = 64 - 4 + 1;
    const auto col = [&](std::size_t p, std::size_t m, std::size_t n) {
        return g1.g.col(static_cast<Eigen::Index>((p * Mc + m) * Nc + n));
    };
    CHECK((col(1, 2, 3) - std::polar(1.0, ph.spatial_phase) * col(0, 2, 3)).norm() < 1e-12);
    CHECK((col(0, 3, 3) - std::polar(1.0, ph.doppler_phase) * col(0, 2, 3)).norm() < 1e-12);
    CHECK((col(0, 2, 4) - std::polar(1.0, -ph.range_phase) * col(0, 2, 3)).norm() < 1e-12);

    // Without smoothing the single snapshot of a coherent scene has rank one.
    SystemConfig small = cfg;
    small.num_rx_antennas = 3;
    small.num_symbols = 8;
    small.num_subcarriers = 10;
    const ObservationTensor three = synthesize_observation(small, targets, 0.0, 1);
    SnapshotMatrix whole;
    whole.g = three.vectorized();
    CHECK(numerical_rank(sample_covariance(whole).psi) == 1);
    CHECK(numerical_rank(smoothed_covariance(three, {2, 4, 5}).psi) == 3);
}

TEST_CASE("noise-only covariance approaches the identity", "[smoothing][noise]")
{
    // Short windows on a large grid keep N_L / N_s small; the spectral
    // deviation then stays inside 5 / sqrt(N_s).
    const SystemConfig cfg = preset("nr120");
    const ObservationTensor obs = synthesize_observation(cfg, std::vector<Target>{}, 1.0, 99);
    for (const SmoothingDims d : {SmoothingDims{1, 2, 1}, SmoothingDims{1, 2, 2}, SmoothingDims{2, 1, 2}}) {
        const Covariance c = smoothed_covariance(obs, d);
        const Eigen::MatrixXcd dev = c.psi - Eigen::MatrixXcd::Identity(c.psi.rows(), c.psi.cols());
        const std::vector<double> ev = descending_eigenvalues(dev);
        const double spectral = std::max(std::abs(ev.front()), std::abs(ev.back()));
        INFO("dims " << d.antennas << "," << d.symbols << "," << d.subcarriers << " spectral " << spectral);
        CHECK(spectral < 5.0 / std::sqrt(static_cast<double>(c.snapshots)));
    }
}
