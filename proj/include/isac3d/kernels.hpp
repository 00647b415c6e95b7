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

// Data-parallel inner kernels. Every kernel has an OpenMP implementation used
// by the library and a plain serial reference kept for tests and benchmarks.
// The OpenMP variants split work over fixed tiles whose arithmetic does not
// depend on the number of threads, so both give bitwise-stable results run
// to run.

#include "isac3d/model.hpp"
#include "isac3d/smoothing.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace isac3d::kernels {

/// Rows per output tile of the covariance update.
inline constexpr Eigen::Index kCovarianceTile = 128;

/// Lower triangle of `acc` += cols * cols^H. Entries above the diagonal are
/// unspecified afterwards; callers mirror the lower triangle.
void hermitian_rank_update(Eigen::MatrixXcd& acc, const Eigen::Ref<const Eigen::MatrixXcd>& cols);
void hermitian_rank_update_serial(Eigen::MatrixXcd& acc, const Eigen::Ref<const Eigen::MatrixXcd>& cols);

/// y = A x for a dense square matrix.
void matvec(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& x, Eigen::VectorXcd& y);
void matvec_serial(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& x, Eigen::VectorXcd& y);

/// Writes snapshot columns [first, first + out.cols()) into `out`.
void gather_snapshots(const ObservationTensor& obs, const SmoothingDims& dims, std::size_t first,
                      Eigen::MatrixXcd& out);
void gather_snapshots_serial(const ObservationTensor& obs, const SmoothingDims& dims,
                             std::size_t first, Eigen::MatrixXcd& out);

} // namespace isac3d::kernels
