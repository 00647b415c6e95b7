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

#include "isac3d/io.hpp"

#include <catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <sstream>

using namespace isac3d;
using Catch::Matchers::WithinRel;

namespace {

ObservationTensor sample_tensor()
{
    const SystemConfig cfg = preset("nr120-desk");
    return synthesize_observation(cfg, std::vector<Target>{{30.0, 4.0, 0.2}}, 0.25, 5);
}

// GCC 11 at -O3 -march=native folds a plain double->float->double round
// trip inside the vectorized loop; the volatile store keeps the rounding.
double to_single(double x)
{
    volatile float f = static_cast<float>(x);
    return f;
}

} // namespace

TEST_CASE("observation files round trip at single precision", "[io]")
{
    const ObservationTensor obs = sample_tensor();
    std::stringstream buf;
    write_observation(buf, obs);
    const std::string bytes = buf.str();
    REQUIRE(bytes.size() == kObservationHeaderBytes + obs.size() * 8);
    CHECK(bytes.substr(0, 4) == "ISAC");
    std::uint32_t fields[4];
    std::memcpy(fields, bytes.data() + 4, sizeof fields);
    CHECK(fields[0] == kObservationFormatVersion);
    CHECK(fields[1] == obs.antennas());
    CHECK(fields[2] == obs.symbols());
    CHECK(fields[3] == obs.subcarriers());
    double var = 0.0;
    std::memcpy(&var, bytes.data() + 20, sizeof var);
    CHECK(var == 0.25);

    const ObservationTensor back = read_observation(buf);
    REQUIRE(back.size() == obs.size());
    CHECK(back.noise_var() == 0.25);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const cdouble expect{to_single(obs.data()[i].real()), to_single(obs.data()[i].imag())};
        CHECK(back.data()[i] == expect);
    }
}

TEST_CASE("malformed observation files are rejected", "[io]")
{
    std::stringstream buf;
    write_observation(buf, sample_tensor());
    const std::string good = buf.str();

    std::string bad_magic = good;
    bad_magic[0] = 'X';
    std::stringstream a(bad_magic);
    CHECK_THROWS_WITH(read_observation(a), Catch::Matchers::ContainsSubstring("magic"));

    std::string bad_version = good;
    bad_version[4] = 9;
    std::stringstream b(bad_version);
    CHECK_THROWS_AS(read_observation(b), std::runtime_error);

    std::stringstream c(good.substr(0, good.size() - 3));
    CHECK_THROWS_AS(read_observation(c), std::runtime_error);

    std::stringstream d(good.substr(0, 10));
    CHECK_THROWS_AS(read_observation(d), std::runtime_error);
}

TEST_CASE("observation files on disk", "[io]")
{
    const auto path = std::filesystem::temp_directory_path() / "isac3d_io_test.bin";
    const ObservationTensor obs = sample_tensor();
    save_observation(path, obs);
    CHECK(std::filesystem::file_size(path) == kObservationHeaderBytes + obs.size() * 8);
    const ObservationTensor back = load_observation(path);
    CHECK(back.subcarriers() == obs.subcarriers());
    std::filesystem::remove(path);
    CHECK_THROWS(load_observation(path));
}

TEST_CASE("targets documents", "[io]")
{
    const auto t = parse_targets(R"([
        {"range_m": 35, "velocity_mps": 15, "azimuth_deg": 20},
        {"range_m": 60, "velocity_mps": -10, "azimuth_deg": -20, "amplitude": 0.5},
        {"range_m": 80, "velocity_mps": 0, "azimuth_deg": 0, "amplitude_re": 0.0, "amplitude_im": -1.0}
    ])");
    REQUIRE(t.size() == 3);
    CHECK_THAT(t[0].azimuth_rad, WithinRel(deg2rad(20.0), 1e-15));
    CHECK(t[0].amplitude == cdouble(1.0, 0.0));
    CHECK(t[1].amplitude == cdouble(0.5, 0.0));
    CHECK(t[2].amplitude == cdouble(0.0, -1.0));

    const auto again = parse_targets(targets_to_json(t));
    REQUIRE(again.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK_THAT(again[i].range_m, WithinRel(t[i].range_m, 1e-15));
        CHECK_THAT(again[i].velocity_mps, WithinRel(t[i].velocity_mps, 1e-15));
        CHECK(std::abs(again[i].azimuth_rad - t[i].azimuth_rad) < 1e-15);
        CHECK(std::abs(again[i].amplitude - t[i].amplitude) < 1e-15);
    }

    CHECK_THROWS(parse_targets(R"([{"range_m": 35}])"));
    CHECK_THROWS(parse_targets(R"({"range_m": 35})"));
    CHECK_THROWS(read_text_file("/nonexistent/targets.json"));
}
