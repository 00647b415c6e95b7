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
#include "isac3d/smoothing.hpp"
#include "isac3d/subspace.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace isac3d {

/// Row-selection pairs that shift a window by one subcarrier (range), one
/// symbol (velocity) or one antenna (azimuth). Each map is a gather from
/// {0, ..., N_L-1} in the snapshot ordering (symbol fastest, then
/// subcarrier, then antenna).
struct SelectionOperators {
    SmoothingDims dims;
    std::vector<Eigen::Index> range_first, range_second;
    std::vector<Eigen::Index> velocity_first, velocity_second;
    std::vector<Eigen::Index> azimuth_first, azimuth_second;
};

/// Throws DomainError when any window extent is below 2.
SelectionOperators build_selection_operators(const SmoothingDims& dims);

/// Rows of `u` picked by `rows`.
Eigen::MatrixXcd select_rows(const Eigen::MatrixXcd& u, const std::vector<Eigen::Index>& rows);

/// One auto-paired estimate; all three values come from the same eigenvector.
struct PairedEstimate {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double azimuth_rad = 0.0;
    cdouble range_eigenvalue;
    cdouble velocity_eigenvalue;
    cdouble azimuth_eigenvalue;
    /// |lambda angle / (2 pi d)| exceeded 1 and was clamped.
    bool azimuth_clamped = false;
};

struct EstimateSet {
    std::vector<PairedEstimate> targets;  // sorted by range ascending
    double eigenvector_condition = 0.0;   // cond(Q)
    double velocity_offdiag_residue = 0.0;  // ||offdiag(Q T^v Q^-1)||_F
    double azimuth_offdiag_residue = 0.0;   // ||offdiag(Q T^theta Q^-1)||_F
};

/// Auto-paired range/velocity/azimuth from a signal subspace.
///
/// The three shift operators T = (U_1)^+ U_2 are solved by least squares;
/// the eigenvectors of the range operator diagonalize the other two so the
/// eigenvalue triples come out already paired.
EstimateSet estimate(const SignalSubspace& subspace, const SelectionOperators& ops,
                     const SystemConfig& cfg, std::size_t k);

enum class SubspaceMethod { Evd, Fsd };

struct PipelineOptions {
    SmoothingDims dims;
    std::size_t k = 1;
    SubspaceMethod method = SubspaceMethod::Fsd;
    std::size_t fsd_iterations = 0;  // 0 selects default_fsd_iterations(k)
    std::uint64_t seed = 0;          // Lanczos start vector
};

/// smooth -> sample covariance -> signal subspace -> paired estimates.
EstimateSet run_3dje(const ObservationTensor& obs, const SystemConfig& cfg,
                     const PipelineOptions& options);

/// Signal subspace step on its own (shared by the EVD/FSD comparison).
SignalSubspace signal_subspace(const Covariance& psi, const PipelineOptions& options);

} // namespace isac3d
