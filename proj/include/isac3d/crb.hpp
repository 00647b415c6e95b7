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

#include <span>
#include <vector>

namespace isac3d {

/// Steering matrix A = [a_0, ..., a_{K-1}] over the full M x N x P grid
/// (symbol fastest, then subcarrier, then antenna).
Eigen::MatrixXcd array_manifold(const SystemConfig& cfg, std::span<const Target> targets);

/// Derivative matrix [da_i/dphi_i | da_i/dvarphi_i | da_i/dtheta_i], 3K columns.
/// The azimuth block carries the chain-rule factor 2 pi d cos(theta) / lambda.
Eigen::MatrixXcd manifold_derivatives(const SystemConfig& cfg, std::span<const Target> targets);

/// Explicit orthogonal projector I - A (A^H A)^{-1} A^H. Dense MNP x MNP, so
/// only for small grids.
Eigen::MatrixXcd orthogonal_projector(const Eigen::MatrixXcd& a);

/// Bound on the phase-domain parameters (range phase, Doppler phase,
/// azimuth) for all targets, ordered [phi_0..phi_{K-1}, varphi_0.., theta_0..].
struct PhaseDomainCrb {
    Eigen::MatrixXd matrix;  // 3K x 3K
    double jitter = 0.0;     // diagonal loading applied to the Fisher matrix, if any
};

/// (sigma_v^2 / 2) [Re{(Abar^H P_A^perp Abar) .* Omega^T}]^{-1} with Omega the
/// 3x3 tiling of beta beta^H.
PhaseDomainCrb crb_phase_domain(const SystemConfig& cfg, std::span<const Target> targets,
                                double noise_var);

struct TargetCrb {
    double crb_range_m2 = 0.0;
    double crb_velocity_mps2 = 0.0;
    double crb_azimuth_rad2 = 0.0;
    double crb_azimuth_deg2 = 0.0;
    double rcrb_range_m = 0.0;
    double rcrb_velocity_mps = 0.0;
    double rcrb_azimuth_rad = 0.0;
    double rcrb_azimuth_deg = 0.0;
};

struct CrbReport {
    std::vector<TargetCrb> targets;
    Eigen::MatrixXd phase_domain;
    double jitter = 0.0;
};

/// Converts phase-domain variances to range (m^2), velocity ((m/s)^2) and
/// azimuth (rad^2 and deg^2).
CrbReport crb_parameter_domain(const PhaseDomainCrb& crb, const SystemConfig& cfg,
                               std::span<const Target> targets);

inline CrbReport compute_crb(const SystemConfig& cfg, std::span<const Target> targets, double noise_var)
{
    return crb_parameter_domain(crb_phase_domain(cfg, targets, noise_var), cfg, targets);
}

} // namespace isac3d
