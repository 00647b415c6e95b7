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

namespace isac3d::kernels {

namespace {

struct WindowOrigin {
    std::size_t p, m, n;
};

WindowOrigin origin_of(std::size_t col, std::size_t m_count, std::size_t n_count)
{
    const std::size_t n = col % n_count;
    const std::size_t rest = col / n_count;
    return {rest / m_count, rest % m_count, n};
}

void gather_column(const ObservationTensor& obs, const SmoothingDims& dims, WindowOrigin o,
                   cdouble* dst)
{
    for (std::size_t l = 0; l < dims.antennas; ++l)
        for (std::size_t nn = 0; nn < dims.subcarriers; ++nn)
            for (std::size_t mm = 0; mm < dims.symbols; ++mm)
                *dst++ = obs.at(o.p + l, o.m + mm, o.n + nn);
}

} // namespace

void gather_snapshots(const ObservationTensor& obs, const SmoothingDims& dims, std::size_t first,
                      Eigen::MatrixXcd& out)
{
    const std::size_t m_count = obs.symbols() - dims.symbols + 1;
    const std::size_t n_count = obs.subcarriers() - dims.subcarriers + 1;
    const auto cols = out.cols();
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < cols; ++c)
        gather_column(obs, dims, origin_of(first + static_cast<std::size_t>(c), m_count, n_count),
                      out.col(c).data());
}

void gather_snapshots_serial(const ObservationTensor& obs, const SmoothingDims& dims,
                             std::size_t first, Eigen::MatrixXcd& out)
{
    const std::size_t m_count = obs.symbols() - dims.symbols + 1;
    const std::size_t n_count = obs.subcarriers() - dims.subcarriers + 1;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        const WindowOrigin o = origin_of(first + static_cast<std::size_t>(c), m_count, n_count);
        Eigen::Index row = 0;
        for (std::size_t l = 0; l < dims.antennas; ++l)
            for (std::size_t nn = 0; nn < dims.subcarriers; ++nn)
                for (std::size_t mm = 0; mm < dims.symbols; ++mm)
                    out(row++, c) = obs.at(o.p + l, o.m + mm, o.n + nn);
    }
}

} // namespace isac3d::kernels
