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

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sdns/random_fields.hpp"
#include "sdns/spectral_field.hpp"

namespace sdns::testing {

/// Band-limited divergence-free field with unit L^2 norm unless told otherwise.
inline SpectralField random_field(const Grid& grid, std::uint64_t seed, std::uint64_t index, double slope = 2.0,
                                  double norm = 1.0) {
  RandomFieldSpec spec;
  spec.slope = slope;
  spec.l2_norm = norm;
  return random_solenoidal_field(grid, spec, seed, index);
}

/// Real part of the field sampled at an arbitrary point by direct summation.
inline std::vector<double> evaluate_at(const SpectralField& v, const std::array<double, 3>& x) {
  const Grid& grid = v.grid();
  std::vector<double> out(static_cast<std::size_t>(grid.dim()), 0.0);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto& k = grid.wavevector(idx);
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) phase += k[a] * x[a];
    const Complex e(std::cos(phase), std::sin(phase));
    for (int c = 0; c < grid.dim(); ++c) out[static_cast<std::size_t>(c)] += (v.at(c, idx) * e).real();
  }
  return out;
}

}  // namespace sdns::testing
