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

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace isac3d {

namespace {

template <typename T>
void put_le(std::ostream& out, T value)
{
    auto raw = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(raw.begin(), raw.end());
    out.write(reinterpret_cast<const char*>(raw.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in)
{
    std::array<unsigned char, sizeof(T)> raw{};
    if (!in.read(reinterpret_cast<char*>(raw.data()), sizeof(T)))
        throw std::runtime_error("observation file truncated");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(raw.begin(), raw.end());
    return std::bit_cast<T>(raw);
}

} // namespace

void write_observation(std::ostream& out, const ObservationTensor& obs)
{
    out.write("ISAC", 4);
    put_le<std::uint32_t>(out, kObservationFormatVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(obs.antennas()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(obs.symbols()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(obs.subcarriers()));
    put_le<double>(out, obs.noise_var());
    for (const cdouble& z : obs.data()) {
        put_le<float>(out, static_cast<float>(z.real()));
        put_le<float>(out, static_cast<float>(z.imag()));
    }
    if (!out)
        throw std::runtime_error("failed to write observation");
}

ObservationTensor read_observation(std::istream& in)
{
    char magic[4] = {};
    if (!in.read(magic, 4) || std::memcmp(magic, "ISAC", 4) != 0)
        throw std::runtime_error("not an observation file (bad magic)");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kObservationFormatVersion)
        throw std::runtime_error("unsupported observation file version " + std::to_string(version));
    const auto p = get_le<std::uint32_t>(in);
    const auto m = get_le<std::uint32_t>(in);
    const auto n = get_le<std::uint32_t>(in);
    const auto var = get_le<double>(in);
    if (p == 0 || m == 0 || n == 0)
        throw std::runtime_error("observation file has an empty dimension");
    ObservationTensor obs(p, m, n, var);
    for (cdouble& z : obs.data()) {
        const float re = get_le<float>(in);
        const float im = get_le<float>(in);
        z = {re, im};
    }
    return obs;
}

void save_observation(const std::filesystem::path& path, const ObservationTensor& obs)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_observation(out, obs);
}

ObservationTensor load_observation(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return read_observation(in);
}

std::vector<Target> parse_targets(const std::string& json_text)
{
    const auto doc = nlohmann::json::parse(json_text);
    if (!doc.is_array())
        throw std::runtime_error("targets document must be a JSON array");
    std::vector<Target> targets;
    for (const auto& item : doc) {
        Target t;
        t.range_m = item.at("range_m").get<double>();
        t.velocity_mps = item.at("velocity_mps").get<double>();
        t.azimuth_rad = deg2rad(item.at("azimuth_deg").get<double>());
        if (item.contains("amplitude"))
            t.amplitude = {item["amplitude"].get<double>(), 0.0};
        if (item.contains("amplitude_re") || item.contains("amplitude_im"))
            t.amplitude = {item.value("amplitude_re", 0.0), item.value("amplitude_im", 0.0)};
        targets.push_back(t);
    }
    return targets;
}

std::vector<Target> load_targets(const std::filesystem::path& path)
{
    return parse_targets(read_text_file(path));
}

std::string targets_to_json(const std::vector<Target>& targets)
{
    nlohmann::json doc = nlohmann::json::array();
    for (const Target& t : targets)
        doc.push_back({{"range_m", t.range_m},
                       {"velocity_mps", t.velocity_mps},
                       {"azimuth_deg", rad2deg(t.azimuth_rad)},
                       {"amplitude_re", t.amplitude.real()},
                       {"amplitude_im", t.amplitude.imag()}});
    return doc.dump(2);
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace isac3d
