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

#include "isac3d/model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace isac3d {

/// Observation file: little-endian header {"ISAC", u32 version, u32 P, u32 M,
/// u32 N, f64 noise variance} followed by P*M*N complex64 values, antenna
/// major and subcarrier minor.
inline constexpr std::uint32_t kObservationFormatVersion = 1;
inline constexpr std::size_t kObservationHeaderBytes = 28;

void write_observation(std::ostream& out, const ObservationTensor& obs);
ObservationTensor read_observation(std::istream& in);
void save_observation(const std::filesystem::path& path, const ObservationTensor& obs);
ObservationTensor load_observation(const std::filesystem::path& path);

/// Targets document: JSON array of {range_m, velocity_mps, azimuth_deg}
/// with optional "amplitude" (real) or "amplitude_re"/"amplitude_im".
std::vector<Target> parse_targets(const std::string& json_text);
std::vector<Target> load_targets(const std::filesystem::path& path);
std::string targets_to_json(const std::vector<Target>& targets);

std::string read_text_file(const std::filesystem::path& path);

} // namespace isac3d
