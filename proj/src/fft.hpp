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

#include "isac3d/common.hpp"

#include <span>
#include <vector>

namespace isac3d::detail {

/// Unnormalized forward DFT (e^{-j 2 pi k n / L} kernel) of a row-major
/// array with the given extents. `data` is transformed in place.
void fft_forward(std::span<cdouble> data, std::span<const int> extents);

/// `count` contiguous forward transforms of length `length` each.
void fft_forward_batch(std::span<cdouble> data, int length, int count);

} // namespace isac3d::detail
