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

#include <span>
#include <vector>

#include "sdns/grid.hpp"

namespace sdns {

/// Vector field on the torus held as Fourier coefficients, one block of
/// n^d coefficients per velocity component (component-major).
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return grid_; }
  int components() const { return grid_.dim(); }

  std::span<const Complex> component(int c) const;
  std::span<Complex> component(int c);
  const Complex& at(int c, std::size_t idx) const { return coeffs_[offset(c, idx)]; }
  Complex& at(int c, std::size_t idx) { return coeffs_[offset(c, idx)]; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Component values on the physical grid (real parts of the inverse transform).
  std::vector<std::vector<double>> to_physical() const;
  static SpectralField from_physical(const Grid& grid, const std::vector<std::vector<double>>& values);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

  bool is_finite() const;

 private:
  std::size_t offset(int c, std::size_t idx) const { return static_cast<std::size_t>(c) * grid_.size() + idx; }

  Grid grid_;
  std::vector<Complex> coeffs_;
};

/// Field snapshot at a given time.
struct TimedField {
  double time = 0.0;
  SpectralField field;
};

/// Sets every coefficient on a Nyquist row to zero.
void zero_nyquist(SpectralField& v);

/// Largest |coeffs(-k) - conj(coeffs(k))| relative to the largest coefficient.
double hermitian_defect(const SpectralField& v);

/// max_k |k . vhat(k)| / (|k| |vhat(k)|) over nonzero modes; 0 for a solenoidal field.
double divergence_defect(const SpectralField& v);

}  // namespace sdns
