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

#include "sdns/spectral_field.hpp"

namespace sdns {

/// Band-limited Gaussian field: each mode 0 < |k| <= k_max (lattice units)
/// gets amplitude (1 + |k|^2)^{-slope/2}, then the field is made Hermitian,
/// Leray-projected and rescaled to the requested L^2 norm.
struct RandomFieldSpec {
  double slope = 2.0;
  double k_max = 1e9;     ///< Euclidean lattice cutoff
  double l2_norm = 1.0;   ///< target ||v||_{L^2}; 0 leaves the raw scale
  bool two_thirds = true; ///< restrict to the 2/3-dealiased band
};

SpectralField random_solenoidal_field(const Grid& grid, const RandomFieldSpec& spec, std::uint64_t seed,
                                      std::uint64_t index);

/// Real divergence-free single Fourier mode: amplitude * e cos(k.x) with e a
/// unit vector orthogonal to k.  `polarization` picks among the d-1 choices.
SpectralField single_mode_field(const Grid& grid, const std::array<int, 3>& k, double amplitude,
                                int polarization = 0);

/// Unit vectors orthogonal to k (d-1 of them); for k = 0 the d coordinate axes.
std::vector<std::array<double, 3>> polarization_basis(int dim, const std::array<double, 3>& k);

}  // namespace sdns
