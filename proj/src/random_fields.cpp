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

#include "sdns/random_fields.hpp"

#include <cmath>

#include "sdns/rng.hpp"
#include "sdns/spectral_ops.hpp"

namespace sdns {

namespace {

bool in_two_thirds_band(const Grid& grid, std::size_t idx) {
  const auto& lat = grid.lattice(idx);
  for (int a = 0; a < grid.dim(); ++a)
    if (3 * std::abs(lat[a]) >= grid.n()) return false;
  return true;
}

}  // namespace

SpectralField random_solenoidal_field(const Grid& grid, const RandomFieldSpec& spec, std::uint64_t seed,
                                      std::uint64_t index) {
  const GaussianStream stream(seed, StreamTag::random_field, index);
  SpectralField raw(grid);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.is_canonical(idx)) continue;
    if (spec.two_thirds && !in_two_thirds_band(grid, idx)) continue;
    const auto& lat = grid.lattice(idx);
    double lat2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) lat2 += static_cast<double>(lat[a]) * lat[a];
    if (std::sqrt(lat2) > spec.k_max) continue;
    const double amp = std::pow(1.0 + grid.k_squared(idx), -0.5 * spec.slope);
    for (int c = 0; c < grid.dim(); ++c) {
      const auto [re, im] = stream.at(idx, static_cast<std::uint32_t>(c));
      const Complex value(amp * re, amp * im);
      raw.at(c, idx) = value;
      raw.at(c, grid.mirror(idx)) = std::conj(value);
    }
  }
  SpectralField out = leray_project(raw);
  if (spec.l2_norm > 0.0) {
    const double norm = sobolev_norm(0.0, out);
    if (norm > 0.0) out *= spec.l2_norm / norm;
  }
  return out;
}

std::vector<std::array<double, 3>> polarization_basis(int dim, const std::array<double, 3>& k) {
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  std::vector<std::array<double, 3>> basis;
  if (k2 == 0.0) {
    for (int a = 0; a < dim; ++a) {
      std::array<double, 3> e{0.0, 0.0, 0.0};
      e[a] = 1.0;
      basis.push_back(e);
    }
    return basis;
  }
  const double kn = std::sqrt(k2);
  if (dim == 2) {
    basis.push_back({-k[1] / kn, k[0] / kn, 0.0});
    return basis;
  }
  // Cross k with the axis it is least aligned with, then complete the triad.
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (std::abs(k[a]) < std::abs(k[axis])) axis = a;
  std::array<double, 3> ax{0.0, 0.0, 0.0};
  ax[axis] = 1.0;
  std::array<double, 3> e1{k[1] * ax[2] - k[2] * ax[1], k[2] * ax[0] - k[0] * ax[2], k[0] * ax[1] - k[1] * ax[0]};
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (double& x : e1) x /= n1;
  std::array<double, 3> e2{(k[1] * e1[2] - k[2] * e1[1]) / kn, (k[2] * e1[0] - k[0] * e1[2]) / kn,
                           (k[0] * e1[1] - k[1] * e1[0]) / kn};
  basis.push_back(e1);
  basis.push_back(e2);
  return basis;
}

SpectralField single_mode_field(const Grid& grid, const std::array<int, 3>& k, double amplitude, int polarization) {
  const std::size_t idx = grid.index_of(k);
  const auto basis = polarization_basis(grid.dim(), grid.wavevector(idx));
  if (polarization < 0 || polarization >= static_cast<int>(basis.size()))
    throw Error("single_mode_field: polarization out of range");
  const auto& e = basis[static_cast<std::size_t>(polarization)];
  SpectralField out(grid);
  const bool mean_mode = grid.k_squared(idx) == 0.0;
  for (int c = 0; c < grid.dim(); ++c) {
    // cos(k.x) = (e^{ikx} + e^{-ikx}) / 2
    if (mean_mode) {
      out.at(c, idx) = amplitude * e[c];
    } else {
      out.at(c, idx) = 0.5 * amplitude * e[c];
      out.at(c, grid.mirror(idx)) = 0.5 * amplitude * e[c];
    }
  }
  return out;
}

}  // namespace sdns
