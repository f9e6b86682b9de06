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

#include <functional>
#include <span>

#include "sdns/spectral_field.hpp"

namespace sdns {

/// Multiplies every mode by factor(|k|^2); Nyquist rows are zeroed afterwards.
SpectralField apply_multiplier(const SpectralField& v, const std::function<double(double)>& factor);

/// Orthogonal projection onto divergence-free fields; the mean mode is left untouched.
SpectralField leray_project(const SpectralField& v);

/// Bessel potential (I - Laplacian)^{s/2}, i.e. the multiplier (1 + |k|^2)^{s/2}.
SpectralField apply_js(double s, const SpectralField& v);

/// H^s norm, normalized so that s = 0 equals the L^2 norm over the torus.
double sobolev_norm(double s, const SpectralField& v);

/// ||grad v||_{L^2} summed over components.
double grad_l2_norm(const SpectralField& v);

/// Real L^2 inner product over the torus.
double inner_product(const SpectralField& u, const SpectralField& v);

/// H^s inner product <J^s u, J^s v>.
double sobolev_inner_product(double s, const SpectralField& u, const SpectralField& v);

/// L^p norm by rectangle-rule quadrature on the physical grid, combining
/// components as (sum_c ||v_c||_p^p)^{1/p}; for p = infinity the component
/// sup-norms are summed.
double lp_norm(double p, const SpectralField& v);

/// Heat-plus-damping semigroup exp(-t (nu |k|^2 + gamma_eff)).
SpectralField semigroup_multiplier(double t, double gamma_eff, double nu, const SpectralField& v);

/// Copies the coefficients of v onto another grid of the same dimension and
/// side length; modes that do not exist on the target (or sit on its
/// Nyquist rows) are dropped.
SpectralField resample(const SpectralField& v, const Grid& target);

struct HolderNorm {
  double sup = 0.0;       ///< max_i ||v(t_i)||_{H^s}
  double seminorm = 0.0;  ///< max_{i != j} ||v(t_i) - v(t_j)||_{H^s} / |t_i - t_j|^beta
  double total() const { return sup + seminorm; }
};

/// Discrete C^beta([t_0, t_last]; H^s) norm over the sampled path.  This is a
/// lower bound for the norm of the continuous path.
HolderNorm holder_seminorm(double beta, double s, std::span<const TimedField> samples);

}  // namespace sdns
