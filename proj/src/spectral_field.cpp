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

#include "sdns/spectral_field.hpp"

#include <algorithm>
#include <cmath>

namespace sdns {

SpectralField::SpectralField(Grid grid)
    : grid_(std::move(grid)), coeffs_(grid_.size() * static_cast<std::size_t>(grid_.dim())) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size() * static_cast<std::size_t>(grid_.dim()))
    throw Error("spectral field: coefficient count does not match grid");
}

std::span<const Complex> SpectralField::component(int c) const {
  return std::span<const Complex>(coeffs_).subspan(offset(c, 0), grid_.size());
}

std::span<Complex> SpectralField::component(int c) {
  return std::span<Complex>(coeffs_).subspan(offset(c, 0), grid_.size());
}

std::vector<std::vector<double>> SpectralField::to_physical() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(components()));
  std::vector<Complex> buffer(grid_.size());
  for (int c = 0; c < components(); ++c) {
    fft::inverse(grid_, component(c), buffer);
    auto& values = out[static_cast<std::size_t>(c)];
    values.resize(grid_.size());
    std::transform(buffer.begin(), buffer.end(), values.begin(), [](const Complex& z) { return z.real(); });
  }
  return out;
}

SpectralField SpectralField::from_physical(const Grid& grid, const std::vector<std::vector<double>>& values) {
  if (values.size() != static_cast<std::size_t>(grid.dim())) throw Error("from_physical: component count mismatch");
  SpectralField out(grid);
  std::vector<Complex> buffer(grid.size());
  for (int c = 0; c < grid.dim(); ++c) {
    const auto& comp = values[static_cast<std::size_t>(c)];
    if (comp.size() != grid.size()) throw Error("from_physical: component size mismatch");
    std::copy(comp.begin(), comp.end(), buffer.begin());
    fft::forward(grid, buffer, out.component(c));
  }
  zero_nyquist(out);
  return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

bool SpectralField::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

void zero_nyquist(SpectralField& v) {
  const Grid& grid = v.grid();
  for (int c = 0; c < v.components(); ++c) {
    auto comp = v.component(c);
    for (std::size_t idx = 0; idx < grid.size(); ++idx)
      if (grid.is_nyquist(idx)) comp[idx] = Complex(0.0, 0.0);
  }
}

double hermitian_defect(const SpectralField& v) {
  const Grid& grid = v.grid();
  double scale = 0.0;
  double defect = 0.0;
  for (int c = 0; c < v.components(); ++c) {
    const auto comp = v.component(c);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      scale = std::max(scale, std::abs(comp[idx]));
      defect = std::max(defect, std::abs(comp[grid.mirror(idx)] - std::conj(comp[idx])));
    }
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

double divergence_defect(const SpectralField& v) {
  const Grid& grid = v.grid();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double k2 = grid.k_squared(idx);
    if (k2 == 0.0) continue;
    Complex div(0.0, 0.0);
    double amp2 = 0.0;
    for (int c = 0; c < v.components(); ++c) {
      div += grid.wavevector(idx)[c] * v.at(c, idx);
      amp2 += std::norm(v.at(c, idx));
    }
    if (amp2 == 0.0) continue;
    worst = std::max(worst, std::abs(div) / std::sqrt(k2 * amp2));
  }
  return worst;
}

}  // namespace sdns
