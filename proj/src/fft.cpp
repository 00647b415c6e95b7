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

#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace isac3d::detail {

namespace {

// FFTW's planner is not re-entrant; execution on a finished plan is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct PlanGuard {
    fftw_plan plan = nullptr;
    ~PlanGuard()
    {
        if (plan) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

fftw_complex* as_fftw(std::span<cdouble> data)
{
    return reinterpret_cast<fftw_complex*>(data.data());
}

} // namespace

void fft_forward(std::span<cdouble> data, std::span<const int> extents)
{
    std::size_t total = 1;
    for (int e : extents)
        total *= static_cast<std::size_t>(e);
    if (total != data.size())
        throw std::invalid_argument("fft_forward: extents do not match buffer size");
    PlanGuard guard;
    {
        std::lock_guard lock(planner_mutex());
        guard.plan = fftw_plan_dft(static_cast<int>(extents.size()), extents.data(), as_fftw(data),
                                   as_fftw(data), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!guard.plan)
        throw std::runtime_error("fft_forward: FFTW planning failed");
    fftw_execute(guard.plan);
}

void fft_forward_batch(std::span<cdouble> data, int length, int count)
{
    if (static_cast<std::size_t>(length) * static_cast<std::size_t>(count) != data.size())
        throw std::invalid_argument("fft_forward_batch: size mismatch");
    PlanGuard guard;
    {
        std::lock_guard lock(planner_mutex());
        guard.plan = fftw_plan_many_dft(1, &length, count, as_fftw(data), nullptr, 1, length,
                                        as_fftw(data), nullptr, 1, length, FFTW_FORWARD,
                                        FFTW_ESTIMATE);
    }
    if (!guard.plan)
        throw std::runtime_error("fft_forward_batch: FFTW planning failed");
    fftw_execute(guard.plan);
}

} // namespace isac3d::detail
