/*
 * Copyright 2026 The sdns Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sdns/spectral_field.hpp"

namespace sdns {

/// Binary field snapshot, little-endian throughout:
///   char[4] "SDNS" | u32 version | u32 d | u32 n | f64 L | f64 time |
///   coefficients as (re, im) f64 pairs, component-major, lattice row-major.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& os, const TimedField& snapshot);
TimedField read_snapshot(std::istream& is);

void write_snapshot_file(const std::string& path, const TimedField& snapshot);
TimedField read_snapshot_file(const std::string& path);

}  // namespace sdns
