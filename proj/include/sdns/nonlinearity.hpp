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

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdns/spectral_field.hpp"

namespace sdns {

/// Which modes survive around physical-space products.
struct DealiasRule {
  enum class Kind { two_thirds, none };
  Kind kind = Kind::two_thirds;
  /// Retained band |k_i| < cutoff * n / 2 on every axis.
  double cutoff = 2.0 / 3.0;

  static DealiasRule two_thirds() { return {}; }
  static DealiasRule none() { return {Kind::none, 1.0}; }

  bool retains(const Grid& grid, std::size_t idx) const;
  std::string name() const;
};

/// Truncates v to the band retained by rule (Nyquist rows always dropped).
SpectralField dealias(const SpectralField& v, const DealiasRule& rule);

/// Gaussian mollifier width parameter; infinity means no mollification.
struct MollifierParam {
  double m = std::numeric_limits<double>::infinity();

  static MollifierParam none() { return {}; }
  bool is_finite() const { return m < std::numeric_limits<double>::infinity(); }
};

/// Leray-projected, dealiased pseudospectral (u . grad) v.
SpectralField bilinear_B(const SpectralField& u, const SpectralField& v, const DealiasRule& rule = {});

/// Convolution with the unit-mass Gaussian rho_m: multiplier exp(-|k|^2 / (2m)).
SpectralField mollify(const MollifierParam& m, const SpectralField& u);

/// B(rho_m * u, v).
SpectralField bilinear_Bm(const MollifierParam& m, const SpectralField& u, const SpectralField& v,
                          const DealiasRule& rule = {});

/// Closed-form L^p norm of the Gaussian mollifier on R^3:
/// (m / 2pi)^{3/2} (2pi / (m p))^{3/(2p)}.
double rho_lp_norm(double m, double p);

struct RatioSummary {
  double max_ratio = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

/// Worst observed LHS / RHS (constants dropped) for each estimate on B_m.
struct BBoundReport {
  RatioSummary l4;        ///< ||B_m(u,v)||_{H^-1} / (||u||_L4 ||v||_L4)
  RatioSummary rho_l2;    ///< ||B_m(u,v)||_{H^-1} / (||rho_m||_L2 ||u||_H ||v||_H)
  RatioSummary rough_v;   ///< ||B_m(u,v)||_{H^{-1-g}} / (||rho_m||_{L^{6/(4+g)}} ||u||_H ||v||_{H^{(1-g)/2}})
  RatioSummary rough_u;   ///< ||B_m(u,v)||_{H^{-1-g}} / (||rho_m||_{L^{6/(4+g)}} ||u||_{H^{(1-g)/2}} ||v||_H)
};

using FieldPair = std::pair<SpectralField, SpectralField>;

/// Evaluates the four B_m estimates over sample pairs.  Pairs with a zero
/// denominator are skipped and counted; the rho-weighted estimates are
/// skipped entirely when m is infinite.
BBoundReport check_B_bounds(std::span<const FieldPair> samples, const MollifierParam& m, double g,
                            const DealiasRule& rule = {});

/// True when every evaluated ratio of `fine` is within rel_tol of `coarse`.
bool refinement_stable(const RatioSummary& coarse, const RatioSummary& fine, double rel_tol);

}  // namespace sdns
