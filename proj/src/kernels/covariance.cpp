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

#include "isac3d/kernels.hpp"

#include <algorithm>

namespace isac3d::kernels {

void hermitian_rank_update(Eigen::MatrixXcd& acc, const Eigen::Ref<const Eigen::MatrixXcd>& cols)
{
    const Eigen::Index n = acc.rows();
    const Eigen::Index tiles = (n + kCovarianceTile - 1) / kCovarianceTile;
#pragma omp parallel for schedule(dynamic, 1)
    for (Eigen::Index t = 0; t < tiles; ++t) {
        const Eigen::Index r0 = t * kCovarianceTile;
        const Eigen::Index h = std::min(kCovarianceTile, n - r0);
        // Rows [r0, r0+h) against columns [0, r0+h): the lower triangle of
        // this row band plus the diagonal block.
        acc.block(r0, 0, h, r0 + h).noalias() +=
            cols.middleRows(r0, h) * cols.topRows(r0 + h).adjoint();
    }
}

void hermitian_rank_update_serial(Eigen::MatrixXcd& acc, const Eigen::Ref<const Eigen::MatrixXcd>& cols)
{
    const Eigen::Index n = acc.rows();
    for (Eigen::Index c = 0; c < cols.cols(); ++c)
        for (Eigen::Index i = 0; i < n; ++i) {
            const cdouble xi = cols(i, c);
            for (Eigen::Index j = 0; j <= i; ++j)
                acc(i, j) += xi * std::conj(cols(j, c));
        }
}

} // namespace isac3d::kernels
