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
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdns {

using Complex = std::complex<double>;

/// Thrown for any violated precondition on user-supplied data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Periodic box [0, L)^d sampled with n points per axis.
///
/// Fourier coefficients are stored for the full lattice in FFTW order:
/// axis position i maps to the integer wavenumber i for i < n/2 and i - n
/// otherwise.  Position n/2 is the Nyquist row and is kept at zero.
class Grid {
 public:
  Grid(int dim, int n, double length = 2.0 * std::numbers::pi);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  /// Number of lattice points, n^d.
  std::size_t size() const { return size_; }
  /// Physical wavenumber spacing 2*pi/L.
  double k_unit() const { return 2.0 * std::numbers::pi / length_; }
  /// Torus volume L^d.
  double volume() const { return volume_; }

  /// Integer lattice vector of linear index idx (unused axes are 0).
  const std::array<int, 3>& lattice(std::size_t idx) const { return tables_->lattice[idx]; }
  /// Physical wavevector of linear index idx.
  const std::array<double, 3>& wavevector(std::size_t idx) const { return tables_->k[idx]; }
  double k_squared(std::size_t idx) const { return tables_->k2[idx]; }
  bool is_nyquist(std::size_t idx) const { return tables_->nyquist[idx] != 0; }
  /// Linear index of -k.
  std::size_t mirror(std::size_t idx) const { return tables_->mirror[idx]; }
  /// True for exactly one member of each {k, -k} pair (k != 0, non-Nyquist).
  bool is_canonical(std::size_t idx) const { return tables_->canonical[idx] != 0; }
  /// Linear index of an integer lattice vector; components must lie in (-n/2, n/2).
  std::size_t index_of(const std::array<int, 3>& k) const;

  std::string describe() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  struct Tables {
    std::vector<std::array<int, 3>> lattice;
    std::vector<std::array<double, 3>> k;
    std::vector<double> k2;
    std::vector<std::size_t> mirror;
    std::vector<unsigned char> nyquist;
    std::vector<unsigned char> canonical;
  };

  int dim_;
  int n_;
  double length_;
  std::size_t size_;
  double volume_;
  std::shared_ptr<const Tables> tables_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

namespace fft {

/// Physical values -> Fourier coefficients, normalized so that
/// v(x) = sum_k vhat(k) exp(i k.x).
void forward(const Grid& grid, std::span<const Complex> physical, std::span<Complex> spectral);
/// Fourier coefficients -> physical values (unnormalized sum).
void inverse(const Grid& grid, std::span<const Complex> spectral, std::span<Complex> physical);

}  // namespace fft

}  // namespace sdns
