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

namespace {
constexpr Eigen::Index kRowTile = 128;
}

void matvec(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& x, Eigen::VectorXcd& y)
{
    const Eigen::Index n = a.rows();
    y.resize(n);
    const Eigen::Index tiles = (n + kRowTile - 1) / kRowTile;
#pragma omp parallel for schedule(static)
    for (Eigen::Index t = 0; t < tiles; ++t) {
        const Eigen::Index r0 = t * kRowTile;
        const Eigen::Index h = std::min(kRowTile, n - r0);
        y.segment(r0, h).noalias() = a.middleRows(r0, h) * x;
    }
}

void matvec_serial(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& x, Eigen::VectorXcd& y)
{
    y = Eigen::VectorXcd::Zero(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        cdouble s{};
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            s += a(i, j) * x[j];
        y[i] = s;
    }
}

} // namespace isac3d::kernels
