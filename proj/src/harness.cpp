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

#include "isac3d/harness.hpp"

#include "isac3d/crb.hpp"
#include "isac3d/io.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace isac3d {

namespace {

constexpr std::array<std::string_view, 4> kMethodNames{"3dje-fsd", "3dje-evd", "dft2", "dft3"};

bool is_joint(Method m) { return m == Method::JointFsd || m == Method::JointEvd; }

void apply_overrides(SystemConfig& cfg, const nlohmann::json& o)
{
    cfg.carrier_freq_hz = o.value("carrier_freq_hz", cfg.carrier_freq_hz);
    cfg.subcarrier_spacing_hz = o.value("subcarrier_spacing_hz", cfg.subcarrier_spacing_hz);
    cfg.num_subcarriers = o.value("num_subcarriers", cfg.num_subcarriers);
    cfg.num_symbols = o.value("num_symbols", cfg.num_symbols);
    cfg.num_rx_antennas = o.value("num_rx_antennas", cfg.num_rx_antennas);
    cfg.antenna_spacing_m = o.value("antenna_spacing_m", cfg.antenna_spacing_m);
    cfg.cp_duration_s = o.value("cp_duration_s", cfg.cp_duration_s);
    cfg.psk_order = o.value("psk_order", cfg.psk_order);
}

double parse_double(std::string_view s)
{
    const std::string text(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw PreconditionError("not a number: '" + text + "'");
    }
    if (used != text.size())
        throw PreconditionError("not a number: '" + text + "'");
    return v;
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

std::string_view method_name(Method m) { return kMethodNames[static_cast<std::size_t>(m)]; }

Method parse_method(std::string_view name)
{
    for (std::size_t i = 0; i < kMethodNames.size(); ++i)
        if (kMethodNames[i] == name)
            return static_cast<Method>(i);
    throw PreconditionError("unknown method '" + std::string(name) +
                            "' (expected 3dje-fsd, 3dje-evd, dft2 or dft3)");
}

std::vector<std::string> method_names() { return {kMethodNames.begin(), kMethodNames.end()}; }

void Scenario::validate() const
{
    config.validate();
    if (trials < 1)
        throw PreconditionError("scenario: trials must be >= 1");
    if (snr_db.empty())
        throw PreconditionError("scenario: SNR grid is empty");
    for (double s : snr_db)
        if (!std::isfinite(s))
            throw PreconditionError("scenario: SNR values must be finite");
    if (methods.empty())
        throw PreconditionError("scenario: no methods selected");
    if (targets.empty())
        throw PreconditionError("scenario: no targets");
    if (oversample < 1)
        throw PreconditionError("scenario: oversample must be >= 1");
    for (const Target& t : targets)
        validate_target(t, config);
    if (std::any_of(methods.begin(), methods.end(), is_joint)) {
        validate_dims(dims, config.num_rx_antennas, config.num_symbols, config.num_subcarriers);
        build_selection_operators(dims);
    }
}

Scenario parse_scenario(const std::string& json_text)
{
    const auto doc = nlohmann::json::parse(json_text);
    Scenario sc;
    sc.preset = doc.value("preset", sc.preset);
    sc.config = preset(sc.preset);
    if (doc.contains("config"))
        apply_overrides(sc.config, doc.at("config"));

    sc.targets = parse_targets(doc.at("targets").dump());

    const auto& snr = doc.at("snr_db");
    if (snr.is_string())
        sc.snr_db = parse_snr_list(snr.get<std::string>());
    else if (snr.is_array())
        sc.snr_db = snr.get<std::vector<double>>();
    else
        sc.snr_db = {snr.get<double>()};

    sc.trials = doc.value("trials", sc.trials);
    if (doc.contains("methods")) {
        for (const auto& m : doc.at("methods"))
            sc.methods.push_back(parse_method(m.get<std::string>()));
    } else {
        sc.methods = {Method::JointFsd, Method::JointEvd, Method::Dft2, Method::Dft3};
    }
    if (doc.contains("dims")) {
        const auto d = doc.at("dims").get<std::vector<std::size_t>>();
        if (d.size() != 3)
            throw PreconditionError("scenario: dims must list three window extents");
        sc.dims = {d[0], d[1], d[2]};
    }
    sc.fsd_iterations = doc.value("fsd_iterations", sc.fsd_iterations);
    sc.oversample = doc.value("oversample", sc.oversample);
    if (doc.contains("dft_refinement"))
        sc.refinement = parse_refinement(doc.at("dft_refinement").get<std::string>());
    sc.seed = doc.value("seed", sc.seed);
    sc.noiseless = doc.value("noiseless", sc.noiseless);
    sc.validate();
    return sc;
}

std::vector<double> parse_snr_list(std::string_view text)
{
    std::vector<std::string_view> parts;
    const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
    std::size_t start = 0;
    while (true) {
        const std::size_t end = text.find(sep, start);
        parts.push_back(text.substr(start, end == std::string_view::npos ? end : end - start));
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    std::vector<double> out;
    if (sep == ',') {
        for (auto p : parts)
            out.push_back(parse_double(p));
        return out;
    }
    if (parts.size() != 3)
        throw PreconditionError("SNR range must be start:step:stop");
    const double a = parse_double(parts[0]), step = parse_double(parts[1]), b = parse_double(parts[2]);
    if (!(step > 0.0) || b < a)
        throw PreconditionError("SNR range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(a + static_cast<double>(i) * step);
    return out;
}

SquaredErrors failure_penalty(const SystemConfig& cfg)
{
    const double v = 2.0 * cfg.max_velocity_mps();
    return {cfg.max_range_m() * cfg.max_range_m(), v * v, kPi * kPi, 1};
}

double assignment_cost(const Triple& truth, const Triple& est, const SystemConfig& cfg)
{
    const double dr = (est.range_m - truth.range_m) / cfg.range_resolution_m();
    const double dv = (est.velocity_mps - truth.velocity_mps) / cfg.velocity_resolution_mps();
    double cost = dr * dr + dv * dv;
    if (!std::isnan(est.azimuth_rad)) {
        const double da = est.azimuth_rad - truth.azimuth_rad;
        cost += da * da;
    }
    return cost;
}

std::vector<std::size_t> min_cost_assignment_exhaustive(const std::vector<std::vector<double>>& cost)
{
    const std::size_t rows = cost.size();
    if (rows == 0)
        return {};
    const std::size_t cols = cost[0].size();
    std::vector<std::size_t> current(rows), best(rows);
    std::vector<bool> used(cols, false);
    double best_cost = std::numeric_limits<double>::infinity();

    std::function<void(std::size_t, double)> search = [&](std::size_t row, double acc) {
        if (acc >= best_cost)
            return;
        if (row == rows) {
            best_cost = acc;
            best = current;
            return;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (used[c])
                continue;
            used[c] = true;
            current[row] = c;
            search(row + 1, acc + cost[row][c]);
            used[c] = false;
        }
    };
    search(0, 0.0);
    return best;
}

std::vector<std::size_t> min_cost_assignment_hungarian(const std::vector<std::vector<double>>& cost)
{
    // Shortest augmenting paths with row/column potentials; 1-based internally.
    const std::size_t n = cost.size();
    if (n == 0)
        return {};
    const std::size_t m = cost[0].size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> out(n);
    for (std::size_t j = 1; j <= m; ++j)
        if (match[j] != 0)
            out[match[j] - 1] = j - 1;
    return out;
}

std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost)
{
    for (const auto& row : cost)
        if (row.size() < cost.size() || row.size() != cost[0].size())
            throw PreconditionError("assignment: need a rectangular cost matrix with rows <= cols");
    return cost.size() <= 4 ? min_cost_assignment_exhaustive(cost) : min_cost_assignment_hungarian(cost);
}

SquaredErrors match_errors(const std::vector<Triple>& truth, const std::vector<Triple>& estimates,
                           const SystemConfig& cfg)
{
    SquaredErrors out;
    const auto add = [&](const Triple& t, const Triple& e) {
        out.range_m2 += (e.range_m - t.range_m) * (e.range_m - t.range_m);
        out.velocity_mps2 += (e.velocity_mps - t.velocity_mps) * (e.velocity_mps - t.velocity_mps);
        if (!std::isnan(e.azimuth_rad))
            out.azimuth_rad2 += (e.azimuth_rad - t.azimuth_rad) * (e.azimuth_rad - t.azimuth_rad);
    };

    const bool truth_rows = estimates.size() >= truth.size();
    const auto& rows = truth_rows ? truth : estimates;
    const auto& cols = truth_rows ? estimates : truth;
    std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            cost[i][j] = truth_rows ? assignment_cost(rows[i], cols[j], cfg)
                                    : assignment_cost(cols[j], rows[i], cfg);
    const std::vector<std::size_t> pick = min_cost_assignment(cost);

    std::vector<bool> truth_matched(truth.size(), false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t ti = truth_rows ? i : pick[i];
        const std::size_t ei = truth_rows ? pick[i] : i;
        add(truth[ti], estimates[ei]);
        truth_matched[ti] = true;
    }
    const SquaredErrors penalty = failure_penalty(cfg);
    for (bool matched : truth_matched)
        if (!matched) {
            out.range_m2 += penalty.range_m2;
            out.velocity_mps2 += penalty.velocity_mps2;
            out.azimuth_rad2 += penalty.azimuth_rad2;
            ++out.unmatched;
        }
    return out;
}

RmseTriple rmse(const std::vector<Triple>& truth, const std::vector<Triple>& estimates,
                const SystemConfig& cfg)
{
    if (truth.empty())
        throw PreconditionError("rmse: no ground truth");
    const SquaredErrors e = match_errors(truth, estimates, cfg);
    const auto k = static_cast<double>(truth.size());
    return {std::sqrt(e.range_m2 / k), std::sqrt(e.velocity_mps2 / k), std::sqrt(e.azimuth_rad2 / k)};
}

std::vector<Triple> run_method(Method method, const ObservationTensor& obs, const SystemConfig& cfg,
                               const Scenario& scenario, std::uint64_t method_seed)
{
    const std::size_t k = scenario.targets.size();
    std::vector<Triple> out;
    if (is_joint(method)) {
        PipelineOptions opts;
        opts.dims = scenario.dims;
        opts.k = k;
        opts.method = method == Method::JointFsd ? SubspaceMethod::Fsd : SubspaceMethod::Evd;
        opts.fsd_iterations = scenario.fsd_iterations;
        opts.seed = method_seed;
        for (const PairedEstimate& e : run_3dje(obs, cfg, opts).targets)
            out.push_back({e.range_m, e.velocity_mps, e.azimuth_rad});
    } else {
        const DftResult r = method == Method::Dft2 ? dft2d_estimate(obs, cfg, k, scenario.oversample, scenario.refinement)
                                                   : dft3d_estimate(obs, cfg, k, scenario.oversample,
                                                                    scenario.refinement);
        for (const DftEstimate& e : r.targets)
            out.push_back({e.range_m, e.velocity_mps, e.azimuth_rad});
    }
    for (const Triple& t : out)
        if (!std::isfinite(t.range_m) || !std::isfinite(t.velocity_mps))
            throw std::runtime_error("estimator returned a non-finite value");
    return out;
}

std::vector<Target> draw_trial_targets(const std::vector<Target>& targets, Rng& rng)
{
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    std::vector<Target> out = targets;
    for (Target& t : out)
        t.amplitude = std::polar(std::abs(t.amplitude), phase(rng));
    return out;
}

std::uint64_t trial_noise_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial)
{
    return derive_seed(master, snr_index, trial);
}

std::uint64_t trial_method_seed(std::uint64_t master, std::size_t snr_index, Method method,
                                std::size_t trial)
{
    return derive_seed(master, snr_index, static_cast<std::uint64_t>(method) + 1, trial);
}

std::vector<ResultRow> run_sweep(const Scenario& scenario, const SweepOptions& options)
{
    scenario.validate();
    const SystemConfig& cfg = scenario.config;
    const std::size_t trials = scenario.trials;
    const std::size_t n_methods = scenario.methods.size();
    const auto k = static_cast<double>(scenario.targets.size());
    const SquaredErrors penalty = failure_penalty(cfg);
    const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();

    std::vector<ResultRow> rows;
    for (std::size_t si = 0; si < scenario.snr_db.size(); ++si) {
        const double snr = scenario.snr_db[si];
        const double noise_var = scenario.noiseless ? 0.0 : std::pow(10.0, -snr / 10.0);

        // Per-trial slots, reduced below in trial order.
        std::vector<SquaredErrors> errors(trials * n_methods);
        std::vector<char> failed(trials * n_methods, 0);
        std::vector<double> seconds(trials * n_methods, 0.0);
        std::vector<std::array<double, 3>> bound(trials, {0.0, 0.0, 0.0});

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng(trial_noise_seed(scenario.seed, si, t));
            const std::vector<Target> truth_targets = draw_trial_targets(scenario.targets, rng);
            const ObservationTensor obs = synthesize_observation(cfg, truth_targets, noise_var, rng);

            std::vector<Triple> truth;
            for (const Target& tt : truth_targets)
                truth.push_back({tt.range_m, tt.velocity_mps, tt.azimuth_rad});

            try {
                const CrbReport crb = compute_crb(cfg, truth_targets, noise_var);
                for (const TargetCrb& c : crb.targets) {
                    bound[t][0] += c.crb_range_m2;
                    bound[t][1] += c.crb_velocity_mps2;
                    bound[t][2] += c.crb_azimuth_deg2;
                }
            } catch (const SingularityError&) {
                bound[t].fill(std::numeric_limits<double>::quiet_NaN());
            }

            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                const Method method = scenario.methods[mi];
                const std::size_t slot = t * n_methods + mi;
                const auto start = std::chrono::steady_clock::now();
                try {
                    const auto est = run_method(method, obs, cfg, scenario,
                                                trial_method_seed(scenario.seed, si, method, t));
                    errors[slot] = match_errors(truth, est, cfg);
                } catch (const std::exception&) {
                    failed[slot] = 1;
                    SquaredErrors& e = errors[slot];
                    e.range_m2 = k * penalty.range_m2;
                    e.velocity_mps2 = k * penalty.velocity_mps2;
                    e.azimuth_rad2 = k * penalty.azimuth_rad2;
                    e.unmatched = scenario.targets.size();
                }
                seconds[slot] =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            }
        }

        std::array<double, 3> bound_sum{0.0, 0.0, 0.0};
        for (std::size_t t = 0; t < trials; ++t)
            for (int d = 0; d < 3; ++d)
                bound_sum[d] += bound[t][d];
        const double denom = static_cast<double>(trials) * k;

        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            ResultRow row;
            row.snr_db = snr;
            row.method = std::string(method_name(scenario.methods[mi]));
            double sr = 0.0, sv = 0.0, sa = 0.0, time = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                const std::size_t slot = t * n_methods + mi;
                sr += errors[slot].range_m2;
                sv += errors[slot].velocity_mps2;
                sa += errors[slot].azimuth_rad2;
                time += seconds[slot];
                row.failures += failed[slot] ? 1 : 0;
            }
            row.rmse_range_m = std::sqrt(sr / denom);
            row.rmse_velocity_mps = std::sqrt(sv / denom);
            row.rmse_azimuth_deg = scenario.methods[mi] == Method::Dft2
                                       ? std::numeric_limits<double>::quiet_NaN()
                                       : rad2deg(std::sqrt(sa / denom));
            row.rcrb_range_m = std::sqrt(bound_sum[0] / denom);
            row.rcrb_velocity_mps = std::sqrt(bound_sum[1] / denom);
            row.rcrb_azimuth_deg = std::sqrt(bound_sum[2] / denom);
            row.trials = trials;
            row.wall_time_s = options.timing ? time : 0.0;
            row.seed = scenario.seed;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows)
{
    std::ostringstream out;
    out << "snr_db,method,rmse_range_m,rmse_velocity_mps,rmse_azimuth_deg,rcrb_range_m,"
           "rcrb_velocity_mps,rcrb_azimuth_deg,trials,wall_time_s,seed,failures\n";
    for (const ResultRow& r : rows) {
        out << format_number(r.snr_db) << ',' << r.method << ',' << format_number(r.rmse_range_m) << ','
            << format_number(r.rmse_velocity_mps) << ',' << format_number(r.rmse_azimuth_deg) << ','
            << format_number(r.rcrb_range_m) << ',' << format_number(r.rcrb_velocity_mps) << ','
            << format_number(r.rcrb_azimuth_deg) << ',' << r.trials << ','
            << format_number(r.wall_time_s) << ',' << r.seed << ',' << r.failures << '\n';
    }
    return out.str();
}

} // namespace isac3d
