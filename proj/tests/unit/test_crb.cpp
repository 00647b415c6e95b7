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

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace isac3d;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemConfig small_config()
{
    SystemConfig c = preset("nr120");
    c.num_rx_antennas = 4;
    c.num_symbols = 10;
    c.num_subcarriers = 16;
    return c;
}

const std::vector<Target> kThree{{35.0, 15.0, deg2rad(20.0)},
                                 {60.0, 10.0, deg2rad(-20.0)},
                                 {80.0, -10.0, deg2rad(50.0)}};

} // namespace

TEST_CASE("bound scales linearly with the noise variance", "[crb]")
{
    const SystemConfig cfg = preset("nr120-desk");
    const PhaseDomainCrb a = crb_phase_domain(cfg, kThree, 0.3);
    const PhaseDomainCrb b = crb_phase_domain(cfg, kThree, 3.0);
    REQUIRE(a.matrix.rows() == 9);
    CHECK(a.jitter == 0.0);
    for (Eigen::Index i = 0; i < a.matrix.size(); ++i)
        CHECK_THAT(b.matrix(i), WithinRel(10.0 * a.matrix(i), 1e-12));
    CHECK(crb_phase_domain(cfg, kThree, 0.0).matrix.isZero());
}

TEST_CASE("bound matrix is symmetric positive definite", "[crb]")
{
    const PhaseDomainCrb c = crb_phase_domain(preset("nr120-desk"), kThree, 1.0);
    CHECK((c.matrix - c.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.matrix);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("derivative columns match central differences", "[crb][derivatives]")
{
    const SystemConfig cfg = preset("nr120-desk");
    const std::vector<Target> t{{35.0, 15.0, deg2rad(20.0)}, {60.0, 10.0, deg2rad(-20.0)}};
    const Eigen::MatrixXcd d = manifold_derivatives(cfg, t);
    REQUIRE(d.cols() == 6);
    const double h = 1e-6;
    const double k_space = 2.0 * kPi * cfg.antenna_spacing_m / cfg.wavelength_m();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const PhaseTriple ph = derive_phases(t[i], cfg);
        const auto a = [&](double phi, double varphi, double theta) {
            return oracle::kronecker_steering(k_space * std::sin(theta), phi, varphi, cfg.num_rx_antennas,
                                              cfg.num_symbols, cfg.num_subcarriers);
        };
        const double th = t[i].azimuth_rad;
        const Eigen::VectorXcd fd_phi =
            (a(ph.range_phase + h, ph.doppler_phase, th) - a(ph.range_phase - h, ph.doppler_phase, th)) / (2 * h);
        const Eigen::VectorXcd fd_varphi =
            (a(ph.range_phase, ph.doppler_phase + h, th) - a(ph.range_phase, ph.doppler_phase - h, th)) / (2 * h);
        const Eigen::VectorXcd fd_theta =
            (a(ph.range_phase, ph.doppler_phase, th + h) - a(ph.range_phase, ph.doppler_phase, th - h)) / (2 * h);
        const auto rel = [](const Eigen::VectorXcd& x, const Eigen::VectorXcd& ref) {
            return (x - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
        };
        const auto col = [&](std::size_t block) { return d.col(static_cast<Eigen::Index>(block * t.size() + i)); };
        CHECK(rel(col(0), fd_phi) < 1e-6);
        CHECK(rel(col(1), fd_varphi) < 1e-6);
        CHECK(rel(col(2), fd_theta) < 1e-6);
    }
}

TEST_CASE("single-target bound matches a numerically differentiated Fisher matrix", "[crb][oracle]")
{
    const SystemConfig cfg = small_config();
    for (const Target& base : kThree) {
        Target t = base;
        t.amplitude = {0.6, -0.8};
        const double var = 0.5;
        const Eigen::Matrix3d ref = oracle::finite_difference_crb(cfg, t, var);
        const PhaseDomainCrb got = crb_phase_domain(cfg, std::vector<Target>{t}, var);
        for (Eigen::Index i = 0; i < 3; ++i)
            CHECK_THAT(got.matrix(i, i), WithinRel(ref(i, i), 0.005));
    }
}

TEST_CASE("parameter-domain conversion factors", "[crb]")
{
    const SystemConfig cfg = preset("nr120-desk");
    const CrbReport r = compute_crb(cfg, kThree, 0.1);
    const double range_factor = std::pow(kSpeedOfLight / (4.0 * kPi * cfg.subcarrier_spacing_hz), 2);
    const double velocity_factor = std::pow(cfg.wavelength_m() / (4.0 * kPi * cfg.total_symbol_duration_s()), 2);
    for (Eigen::Index i = 0; i < 3; ++i) {
        const TargetCrb& t = r.targets[static_cast<std::size_t>(i)];
        CHECK_THAT(t.crb_range_m2, WithinRel(range_factor * r.phase_domain(i, i), 1e-14));
        CHECK_THAT(t.crb_velocity_mps2, WithinRel(velocity_factor * r.phase_domain(3 + i, 3 + i), 1e-14));
        CHECK_THAT(t.crb_azimuth_rad2, WithinRel(r.phase_domain(6 + i, 6 + i), 1e-14));
        CHECK_THAT(t.crb_azimuth_deg2, WithinRel(t.crb_azimuth_rad2 * std::pow(180.0 / kPi, 2), 1e-14));
        CHECK_THAT(t.rcrb_range_m, WithinRel(std::sqrt(t.crb_range_m2), 1e-15));
        CHECK_THAT(t.rcrb_azimuth_deg, WithinRel(std::sqrt(t.crb_azimuth_deg2), 1e-15));
        CHECK(t.rcrb_velocity_mps > 0.0);
    }
    CHECK_THROWS_AS(crb_parameter_domain(crb_phase_domain(cfg, kThree, 0.1), cfg, std::span(kThree).first(2)),
                    PreconditionError);
}

TEST_CASE("three-target bounds fall with SNR at exactly -10 dB per decade", "[crb]")
{
    const SystemConfig cfg = preset("nr120");
    double prev = std::numeric_limits<double>::infinity();
    for (double snr = -20.0; snr <= 5.0; snr += 5.0) {
        const CrbReport r = compute_crb(cfg, kThree, std::pow(10.0, -snr / 10.0));
        for (const TargetCrb& t : r.targets) {
            CHECK(std::isfinite(t.rcrb_range_m));
            CHECK(t.rcrb_range_m > 0.0);
            CHECK(t.rcrb_velocity_mps > 0.0);
            CHECK(t.rcrb_azimuth_rad > 0.0);
        }
        CHECK(r.targets[0].rcrb_range_m < prev);
        if (std::isfinite(prev))
            CHECK_THAT(prev / r.targets[0].rcrb_range_m, WithinRel(std::pow(10.0, 0.25), 1e-12));
        prev = r.targets[0].rcrb_range_m;
    }
}

TEST_CASE("well separated targets do not interact", "[crb]")
{
    const SystemConfig cfg = preset("nr120-desk");
    const CrbReport joint = compute_crb(cfg, kThree, 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
        const CrbReport alone = compute_crb(cfg, std::span(kThree).subspan(i, 1), 1.0);
        CHECK_THAT(joint.targets[i].crb_range_m2, WithinRel(alone.targets[0].crb_range_m2, 0.05));
        CHECK_THAT(joint.targets[i].crb_velocity_mps2, WithinRel(alone.targets[0].crb_velocity_mps2, 0.05));
        CHECK_THAT(joint.targets[i].crb_azimuth_rad2, WithinRel(alone.targets[0].crb_azimuth_rad2, 0.05));
    }
}

TEST_CASE("orthogonal projector properties", "[crb][projector]")
{
    const SystemConfig cfg = small_config();
    const Eigen::MatrixXcd a = array_manifold(cfg, kThree);
    REQUIRE(a.cols() == 3);
    const Eigen::MatrixXcd p = orthogonal_projector(a);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((p * a).norm() < 1e-10 * a.norm());
    CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate target sets are rejected", "[crb]")
{
    const SystemConfig cfg = preset("nr120-desk");
    const std::vector<Target> twins{{35.0, 15.0, deg2rad(20.0)}, {35.0, 15.0, deg2rad(20.0)}};
    CHECK_THROWS_AS(crb_phase_domain(cfg, twins, 1.0), SingularityError);
    CHECK_THROWS_WITH(crb_phase_domain(cfg, twins, 1.0), Catch::Matchers::ContainsSubstring("0"));
    CHECK_THROWS_AS(crb_phase_domain(cfg, std::vector<Target>{}, 1.0), PreconditionError);
    CHECK_THROWS_AS(crb_phase_domain(cfg, kThree, -1.0), DomainError);
}
