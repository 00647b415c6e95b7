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

// Serial reference kernels against their OpenMP versions, and the two
// covariance paths on the nr120 grid.

#include "isac3d/kernels.hpp"
#include "isac3d/smoothing.hpp"
#include "isac3d/subspace.hpp"

#include <benchmark/benchmark.h>

using namespace isac3d;

namespace {

const ObservationTensor& nr120_observation()
{
    static const ObservationTensor obs = [] {
        const SystemConfig cfg = preset("nr120");
        const std::vector<Target> t{{35.0, 15.0, deg2rad(20.0)}, {60.0, 10.0, deg2rad(-20.0)}};
        return synthesize_observation(cfg, t, 1.0, 1);
    }();
    return obs;
}

Eigen::MatrixXcd random_block(Eigen::Index rows, Eigen::Index cols)
{
    Rng rng(3);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = complex_gaussian(rng, 1.0);
    return m;
}

template <bool Parallel>
void BM_RankUpdate(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const Eigen::MatrixXcd cols = random_block(n, 64);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::hermitian_rank_update(acc, cols);
        else
            kernels::hermitian_rank_update_serial(acc, cols);
        benchmark::DoNotOptimize(acc.data());
    }
}

template <bool Parallel>
void BM_Matvec(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const Eigen::MatrixXcd a = random_block(n, n);
    const Eigen::VectorXcd x = random_block(n, 1);
    Eigen::VectorXcd y(n);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::matvec(a, x, y);
        else
            kernels::matvec_serial(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

template <bool Parallel>
void BM_Gather(benchmark::State& state)
{
    const SmoothingDims dims{7, 15, 15};
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(dims.snapshot_length()), 1024);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::gather_snapshots(nr120_observation(), dims, 0, out);
        else
            kernels::gather_snapshots_serial(nr120_observation(), dims, 0, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_CovarianceSliding(benchmark::State& state)
{
    const SmoothingDims dims{7, 15, 15};
    for (auto _ : state)
        benchmark::DoNotOptimize(smoothed_covariance(nr120_observation(), dims).psi.data());
}

void BM_CovarianceDirect(benchmark::State& state)
{
    const SmoothingDims dims{7, 15, 15};
    for (auto _ : state)
        benchmark::DoNotOptimize(smoothed_covariance_direct(nr120_observation(), dims).psi.data());
}

void BM_SubspaceEvd(benchmark::State& state)
{
    const Covariance c = smoothed_covariance(nr120_observation(), {7, 15, 15});
    for (auto _ : state)
        benchmark::DoNotOptimize(evd_signal_subspace(c, 2).basis.data());
}

void BM_SubspaceFsd(benchmark::State& state)
{
    const Covariance c = smoothed_covariance(nr120_observation(), {7, 15, 15});
    for (auto _ : state)
        benchmark::DoNotOptimize(fsd_signal_subspace(c, 2, default_fsd_iterations(2), 1).basis.data());
}

} // namespace

BENCHMARK(BM_RankUpdate<false>)->Arg(512)->Arg(1575)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankUpdate<true>)->Arg(512)->Arg(1575)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Matvec<false>)->Arg(1575)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Matvec<true>)->Arg(1575)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_Gather<false>)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Gather<true>)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_CovarianceSliding)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CovarianceDirect)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SubspaceEvd)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SubspaceFsd)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
