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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sdns/spectral_field.hpp"
#include "sdns/stats.hpp"

namespace sdns {

/// Bounded Lipschitz map applied to the probe coordinates of v.
enum class Saturation { one, tanh };

Saturation parse_saturation(const std::string& name);
std::string to_string(Saturation psi);

struct NoiseParams {
  double g = 0.5;   ///< roughness exponent in (0, 1)
  double c0 = 1.0;
  double r = 1.0;   ///< amplitude decay c_k = c0 (1 + |k|^2)^{-r/2}
  Saturation psi = Saturation::one;
  std::uint64_t seed = 0;
};

/// Diagonal noise operator on the real orthonormal Fourier basis of H.
///
/// Basis elements are sqrt(2) cos(k.x) e / L^{d/2} and sqrt(2) sin(k.x) e / L^{d/2}
/// for each canonical k and each unit polarization e orthogonal to k (plus
/// the constant fields e_a / L^{d/2} when the mean mode is active).  Element
/// pairs share the amplitude c_k and the saturation factor
/// psi(<v, h_{k,e}>), where the probe h_{k,e} is the cosine element.  Sums
/// "over the lattice" below run over all k (both k and -k) and polarizations,
/// which is the same as summing over the real basis.
class NoiseModel {
 public:
  /// c_k = c0 (1 + |k|^2)^{-r/2} on every non-Nyquist k != 0.
  static NoiseModel power_law(const Grid& grid, const NoiseParams& params);
  /// One active mode +-k with amplitude c on every polarization.
  static NoiseModel single_mode(const Grid& grid, const std::array<int, 3>& k, double c, double g,
                                Saturation psi = Saturation::one, std::uint64_t seed = 0);
  /// Amplitudes given per linear index; must be symmetric under k -> -k.
  static NoiseModel from_amplitudes(const Grid& grid, std::vector<double> amplitudes, double g, Saturation psi,
                                    std::uint64_t seed);
  static NoiseModel silent(const Grid& grid, double g = 0.5);

  const Grid& grid() const { return grid_; }
  double g() const { return g_; }
  Saturation saturation() const { return psi_; }
  std::uint64_t seed() const { return seed_; }
  bool additive() const { return psi_ == Saturation::one; }
  bool is_silent() const { return active_.empty(); }

  double amplitude(std::size_t idx) const { return amplitude_[idx]; }
  /// Linear indices with c_k > 0.
  const std::vector<std::size_t>& active_modes() const { return active_; }
  /// Polarizations of mode idx (shared between k and -k).
  std::span<const std::array<double, 3>> polarizations(std::size_t idx) const;

  double psi(double x) const;
  double sup_psi() const { return 1.0; }
  double lip_psi() const { return psi_ == Saturation::one ? 0.0 : 1.0; }

  /// sup_v ||G(v)||_{HS(Y; H^{-g})} = sup|psi| (sum c_k^2 (1+|k|^2)^{-g})^{1/2}.
  double k_g2() const;
  /// L^4 norm of the square function (sum_j |c_j J^{-g} phi_j(x)|^2)^{1/2} at
  /// sup|psi|; a surrogate for the H^{-g,4} gamma-radonifying norm.
  double k_g4_surrogate() const;
  /// Lipschitz constant of v -> G(v) from H^{-g} into HS(Y; H^{-g}):
  /// Lip(psi) * max_k sqrt(m_k) c_k with m_k = 2 for k != 0 (the probe feeds
  /// both the cosine and sine elements) and 1 for the mean mode.
  double lipschitz_constant() const;

  /// psi(<v, h_{k,a}>) stored at [3 * canonical_idx + a]; mirrors are read
  /// through canonical_index().
  std::vector<double> saturation_values(const SpectralField& v) const;
  std::size_t canonical_index(std::size_t idx) const;

 private:
  NoiseModel(Grid grid, std::vector<double> amplitudes, double g, Saturation psi, std::uint64_t seed);

  Grid grid_;
  std::vector<double> amplitude_;
  double g_;
  Saturation psi_;
  std::uint64_t seed_;
  std::vector<std::size_t> active_;
  std::vector<std::array<double, 3>> basis_;  // 3 slots per linear index
  std::vector<unsigned char> basis_count_;
};

/// Address of one trajectory's noise: increments are a pure function of
/// (seed, trajectory, step, mode, polarization).
struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t trajectory = 0;
};

/// Cylindrical Wiener increment projected on the lattice: complex xi per
/// (mode, polarization) with E xi = 0, E |xi|^2 = dt, Re/Im each of variance
/// dt/2, xi(-k) = conj(xi(k)); the mean mode is real with variance dt.
struct WienerIncrement {
  double dt = 0.0;
  std::vector<Complex> xi;  ///< [3 * idx + polarization]

  const Complex& at(std::size_t idx, int a) const { return xi[3 * idx + static_cast<std::size_t>(a)]; }
};

WienerIncrement sample_increment(const NoiseModel& model, double dt, const NoiseStream& stream, std::uint64_t step);

/// G(v) xi = sum_k c_k psi_k(v) xi_k e_k / L^{d/2}.
SpectralField apply_G(const NoiseModel& model, const SpectralField& v, const WienerIncrement& xi);

/// Hilbert-Schmidt norm of G(v) into H^{-g}.
double hs_norm_G(const NoiseModel& model, const SpectralField& v);

/// ||G(v1) - G(v2)||_{HS(Y; H^{-g})}.
double hs_distance_G(const NoiseModel& model, const SpectralField& v1, const SpectralField& v2);

/// Exact-in-law step of dz + (nu A + gamma_total) z dt = G(v) dw with v
/// frozen at the start of the step.  Per mode, with rate
/// lambda = nu |k|^2 + gamma_total:
///   z <- exp(-lambda dt) z + c_k psi_k(v) eta_k,
///   Var(eta_k) = (1 - exp(-2 lambda dt)) / (2 lambda).
class OuPropagator {
 public:
  OuPropagator(const NoiseModel& model, double dt, double nu, double gamma_total);

  void step(SpectralField& z, const SpectralField& v, const WienerIncrement& xi) const;
  double dt() const { return dt_; }
  double gamma_total() const { return gamma_total_; }

 private:
  const NoiseModel* model_;
  double dt_;
  double gamma_total_;
  std::vector<double> decay_;
  std::vector<double> gain_;
};

SpectralField ou_exact_step(const NoiseModel& model, const SpectralField& v, const SpectralField& z,
                            const WienerIncrement& xi, double nu, double gamma_total);
SpectralField ou_exact_step(const NoiseModel& model, const SpectralField& v, const SpectralField& z, double dt,
                            double nu, double gamma_total, const NoiseStream& stream, std::uint64_t step);

struct ZetaSetup {
  double nu = 1.0;
  double gamma = 1.0;
  double dt = 0.01;
};

struct ZetaAlphaRow {
  double alpha = 0.0;
  stats::MeanSe h2;     ///< E ||zeta^alpha(t_probe)||_H^2
  stats::MeanSe l4_4;   ///< E ||zeta^alpha(t_probe)||_{L^4}^4
  /// False when this row exceeds the previous one by more than two standard
  /// errors of the paired difference (always true for the first row).
  bool non_increasing = true;
};

struct ZetaAlphaTable {
  std::vector<ZetaAlphaRow> rows;
  double t_probe = 0.0;
  std::size_t n_samples = 0;
  bool monotone() const;
};

/// Velocity path feeding G(v): returns v at the start of the given step.
using DriverPath = std::function<SpectralField(std::uint64_t step)>;
/// One driver path per Monte-Carlo sample.
using DriverFactory = std::function<DriverPath(std::uint64_t sample)>;

/// Monte-Carlo moments of the extra-damped stochastic convolution zeta^alpha
/// (zero initial datum, damping gamma + alpha) at t_probe.  All alphas share
/// the increments of each sample.  Without a driver, v is the zero field.
ZetaAlphaTable zeta_alpha_statistics(const NoiseModel& model, const ZetaSetup& setup, std::span<const double> alphas,
                                     double t_probe, std::size_t n_samples, const DriverFactory& driver = {});

/// Closed-form E ||zeta^alpha(t)||_H^2 for additive noise:
/// sum over the lattice of c_k^2 (1 - exp(-2 lambda t)) / (2 lambda).
double zeta_alpha_energy_additive(const NoiseModel& model, const ZetaSetup& setup, double alpha, double t);

}  // namespace sdns
