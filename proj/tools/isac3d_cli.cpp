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

// Command-line front end: presets, observation synthesis, estimation, bounds
// and Monte Carlo sweeps.

#include "isac3d/baselines.hpp"
#include "isac3d/crb.hpp"
#include "isac3d/estimator.hpp"
#include "isac3d/harness.hpp"
#include "isac3d/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace isac3d;

SmoothingDims parse_dims(const std::string& text)
{
    std::vector<std::size_t> v;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find(',', start);
        const std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        v.push_back(static_cast<std::size_t>(std::stoul(part)));
        if (end == std::string::npos)
            break;
        start = end + 1;
    }
    if (v.size() != 3)
        throw PreconditionError("--dims expects P,M,N");
    return {v[0], v[1], v[2]};
}

void print_presets()
{
    std::printf("%-11s %9s %9s %5s %5s %3s %8s %9s %9s %9s %9s\n", "name", "fc_GHz", "df_kHz", "N",
                "M", "P", "Tcp_us", "Rmax_m", "vmax_mps", "dR_m", "dv_mps");
    for (const std::string& name : preset_names()) {
        const SystemConfig c = preset(name);
        std::printf("%-11s %9.3f %9.1f %5zu %5zu %3zu %8.3f %9.2f %9.2f %9.3f %9.3f\n", name.c_str(),
                    c.carrier_freq_hz / 1e9, c.subcarrier_spacing_hz / 1e3, c.num_subcarriers,
                    c.num_symbols, c.num_rx_antennas, c.cp_duration_s * 1e6, c.max_range_m(),
                    c.max_velocity_mps(), c.range_resolution_m(), c.velocity_resolution_mps());
    }
}

struct SimulateArgs {
    std::string preset = "nr120";
    std::string targets;
    double snr_db = 0.0;
    std::uint64_t seed = 1;
    std::string out;
    bool noiseless = false;
};

void run_simulate(const SimulateArgs& a)
{
    const SystemConfig cfg = preset(a.preset);
    const std::vector<Target> targets = load_targets(a.targets);
    const double var = a.noiseless ? 0.0 : std::pow(10.0, -a.snr_db / 10.0);
    save_observation(a.out, synthesize_observation(cfg, targets, var, a.seed));
}

struct EstimateArgs {
    std::string in;
    std::size_t k = 1;
    std::string method = "3dje-fsd";
    std::string dims = "7,15,15";
    std::string preset = "nr120";
    std::size_t fsd_iterations = 0;
    std::uint64_t seed = 1;
    int oversample = kDefaultOversample;
    std::string refinement = "none";
    bool json = false;
};

void run_estimate(const EstimateArgs& a)
{
    const ObservationTensor obs = load_observation(a.in);
    SystemConfig cfg = preset(a.preset);
    cfg.num_rx_antennas = obs.antennas();
    cfg.num_symbols = obs.symbols();
    cfg.num_subcarriers = obs.subcarriers();

    Scenario sc;
    sc.config = cfg;
    sc.targets.resize(a.k);
    sc.dims = parse_dims(a.dims);
    sc.fsd_iterations = a.fsd_iterations;
    sc.oversample = a.oversample;
    sc.refinement = parse_refinement(a.refinement);
    const Method method = parse_method(a.method);
    const std::vector<Triple> est = run_method(method, obs, cfg, sc, a.seed);

    if (a.json) {
        nlohmann::json doc;
        doc["method"] = a.method;
        doc["k"] = a.k;
        doc["shortfall"] = est.size() < a.k;
        doc["targets"] = nlohmann::json::array();
        for (const Triple& t : est) {
            nlohmann::json item{{"range_m", t.range_m}, {"velocity_mps", t.velocity_mps}};
            item["azimuth_deg"] = std::isnan(t.azimuth_rad) ? nlohmann::json(nullptr)
                                                           : nlohmann::json(rad2deg(t.azimuth_rad));
            doc["targets"].push_back(item);
        }
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::printf("%12s %14s %12s\n", "range_m", "velocity_mps", "azimuth_deg");
    for (const Triple& t : est)
        std::printf("%12.6f %14.6f %12.6f\n", t.range_m, t.velocity_mps, rad2deg(t.azimuth_rad));
    if (est.size() < a.k)
        std::fprintf(stderr, "warning: only %zu of %zu peaks found\n", est.size(), a.k);
}

struct CrbArgs {
    std::string preset = "nr120";
    std::string targets;
    std::string snr = "-20:5:5";
    bool csv = false;
};

void run_crb(const CrbArgs& a)
{
    const SystemConfig cfg = preset(a.preset);
    const std::vector<Target> targets = load_targets(a.targets);
    const std::vector<double> snrs = parse_snr_list(a.snr);
    if (a.csv)
        std::printf("snr_db,target,rcrb_range_m,rcrb_velocity_mps,rcrb_azimuth_deg\n");
    else
        std::printf("%8s %6s %14s %16s %16s\n", "snr_db", "target", "rcrb_range_m", "rcrb_velocity_mps",
                    "rcrb_azimuth_deg");
    for (double snr : snrs) {
        const CrbReport r = compute_crb(cfg, targets, std::pow(10.0, -snr / 10.0));
        for (std::size_t i = 0; i < r.targets.size(); ++i) {
            const TargetCrb& t = r.targets[i];
            if (a.csv)
                std::printf("%.10g,%zu,%.10g,%.10g,%.10g\n", snr, i, t.rcrb_range_m, t.rcrb_velocity_mps,
                            t.rcrb_azimuth_deg);
            else
                std::printf("%8.2f %6zu %14.6g %16.6g %16.6g\n", snr, i, t.rcrb_range_m,
                            t.rcrb_velocity_mps, t.rcrb_azimuth_deg);
        }
    }
}

struct McArgs {
    std::string scenario;
    std::string out;
    int workers = 0;
    bool timing = false;
};

void run_mc(const McArgs& a)
{
    const Scenario sc = parse_scenario(read_text_file(a.scenario));
    const std::string csv = format_csv(run_sweep(sc, {a.workers, a.timing}));
    if (a.out.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream out(a.out, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + a.out + " for writing");
    out << csv;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"OFDM sensing simulator: joint range, velocity and azimuth estimation"};
    app.require_subcommand(1);

    app.add_subcommand("presets", "list the built-in system presets");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "write one noisy observation to a binary file");
    simulate->add_option("--preset", sim.preset, "system preset")->capture_default_str();
    simulate->add_option("--targets", sim.targets, "targets JSON file")->required();
    simulate->add_option("--snr-db", sim.snr_db, "SNR per element in dB")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "noise seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "output observation file")->required();
    simulate->add_flag("--noiseless", sim.noiseless, "omit the noise term");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "estimate target triples from an observation file");
    estimate->add_option("--in", est.in, "observation file")->required();
    estimate->add_option("--k", est.k, "number of targets")->capture_default_str();
    estimate->add_option("--method", est.method, "3dje-fsd, 3dje-evd, dft2 or dft3")->capture_default_str();
    estimate->add_option("--dims", est.dims, "smoothing window P,M,N")->capture_default_str();
    estimate->add_option("--preset", est.preset, "preset supplying carrier, spacing and timing")
        ->capture_default_str();
    estimate->add_option("--fsd-iters", est.fsd_iterations, "Lanczos steps (0 = default)");
    estimate->add_option("--seed", est.seed, "Lanczos start-vector seed")->capture_default_str();
    estimate->add_option("--oversample", est.oversample, "DFT zero-padding factor")->capture_default_str();
    estimate->add_option("--refine", est.refinement, "DFT peak refinement: none or parabolic")
        ->capture_default_str();
    estimate->add_flag("--json", est.json, "emit JSON");

    CrbArgs crb;
    auto* bound = app.add_subcommand("crb", "Cramer-Rao bounds over an SNR sweep");
    bound->add_option("--preset", crb.preset, "system preset")->capture_default_str();
    bound->add_option("--targets", crb.targets, "targets JSON file")->required();
    bound->add_option("--snr-db", crb.snr, "start:step:stop or a comma list")->capture_default_str();
    bound->add_flag("--csv", crb.csv, "emit CSV");

    McArgs mc;
    auto* monte = app.add_subcommand("mc", "Monte Carlo RMSE sweep from a scenario file");
    monte->add_option("--scenario", mc.scenario, "scenario JSON file")->required();
    monte->add_option("--out", mc.out, "CSV output (stdout if omitted)");
    monte->add_option("--workers", mc.workers, "parallel trial workers (0 = all cores)");
    monte->add_flag("--timing", mc.timing, "record wall time per row");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("presets"))
            print_presets();
        else if (*simulate)
            run_simulate(sim);
        else if (*estimate)
            run_estimate(est);
        else if (*bound)
            run_crb(crb);
        else if (*monte)
            run_mc(mc);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
