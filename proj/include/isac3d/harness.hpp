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

#include "isac3d/baselines.hpp"
#include "isac3d/estimator.hpp"
#include "isac3d/model.hpp"
#include "isac3d/smoothing.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace isac3d {

/// Registered estimators, in the order used for per-method seeds.
enum class Method { JointFsd, JointEvd, Dft2, Dft3 };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);  // throws PreconditionError
std::vector<std::string> method_names();

struct Scenario {
    std::string preset = "nr120-desk";
    SystemConfig config;  // preset plus any overrides
    std::vector<Target> targets;
    std::vector<double> snr_db;
    std::size_t trials = 100;
    std::vector<Method> methods;
    SmoothingDims dims;
    std::size_t fsd_iterations = 0;  // 0 selects the default
    int oversample = 4;
    PeakRefinement refinement = PeakRefinement::None;
    std::uint64_t seed = 1;
    bool noiseless = false;

    /// Throws PreconditionError or DomainError.
    void validate() const;
};

/// Scenario document, e.g.
/// {"preset": "nr120-desk", "targets": [...], "snr_db": [-10, 0], "trials": 100,
///  "methods": ["3dje-fsd", "dft3"], "dims": [7, 12, 12], "fsd_iterations": 4,
///  "oversample": 4, "dft_refinement": "none", "seed": 7, "noiseless": false, "config": {"num_subcarriers": 32}}
Scenario parse_scenario(const std::string& json_text);

/// "a:step:b" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_snr_list(std::string_view text);

/// One (range, velocity, azimuth) point; azimuth may be NaN when the method
/// does not measure it.
struct Triple {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double azimuth_rad = 0.0;
};

/// Sums of squared errors over the targets of a single trial.
struct SquaredErrors {
    double range_m2 = 0.0;
    double velocity_mps2 = 0.0;
    double azimuth_rad2 = 0.0;
    std::size_t unmatched = 0;
};

/// Worst-case contribution of a target that could not be estimated.
SquaredErrors failure_penalty(const SystemConfig& cfg);

/// Normalized squared distance used for assignment: range over the range
/// resolution, velocity over the velocity resolution, azimuth in radians.
/// NaN azimuths are ignored.
double assignment_cost(const Triple& truth, const Triple& est, const SystemConfig& cfg);

/// Minimum-cost injective assignment between rows and columns of `cost`
/// (rows <= cols). Exhaustive search up to 4 rows, Hungarian beyond.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost);
std::vector<std::size_t> min_cost_assignment_exhaustive(const std::vector<std::vector<double>>& cost);
std::vector<std::size_t> min_cost_assignment_hungarian(const std::vector<std::vector<double>>& cost);

/// Matches estimates to truth and sums the squared errors. Truths left
/// without an estimate receive failure_penalty().
SquaredErrors match_errors(const std::vector<Triple>& truth, const std::vector<Triple>& estimates,
                           const SystemConfig& cfg);

struct RmseTriple {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double azimuth_rad = 0.0;
};

/// Single-trial root mean square error over the K targets.
RmseTriple rmse(const std::vector<Triple>& truth, const std::vector<Triple>& estimates,
                const SystemConfig& cfg);

struct ResultRow {
    double snr_db = 0.0;
    std::string method;
    double rmse_range_m = 0.0;
    double rmse_velocity_mps = 0.0;
    double rmse_azimuth_deg = 0.0;
    double rcrb_range_m = 0.0;
    double rcrb_velocity_mps = 0.0;
    double rcrb_azimuth_deg = 0.0;
    std::size_t trials = 0;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    std::size_t failures = 0;
};

struct SweepOptions {
    int workers = 0;      // 0 uses the OpenMP default
    bool timing = false;  // record wall time; off keeps the output reproducible
};

/// Estimates from one method on one observation.
std::vector<Triple> run_method(Method method, const ObservationTensor& obs, const SystemConfig& cfg,
                               const Scenario& scenario, std::uint64_t method_seed);

/// Complex amplitudes for one trial: unit modulus, uniform phase.
std::vector<Target> draw_trial_targets(const std::vector<Target>& targets, Rng& rng);

/// Per-trial streams. The noise seed is shared by all methods.
std::uint64_t trial_noise_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial);
std::uint64_t trial_method_seed(std::uint64_t master, std::size_t snr_index, Method method,
                                std::size_t trial);

std::vector<ResultRow> run_sweep(const Scenario& scenario, const SweepOptions& options = {});

std::string format_csv(const std::vector<ResultRow>& rows);

} // namespace isac3d
