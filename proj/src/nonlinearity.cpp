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

#include "sdns/nonlinearity.hpp"

#include <cmath>
#include <numbers>

#include "sdns/spectral_ops.hpp"

namespace sdns {

bool DealiasRule::retains(const Grid& grid, std::size_t idx) const {
  if (grid.is_nyquist(idx)) return false;
  if (kind == Kind::none) return true;
  const auto& lat = grid.lattice(idx);
  // |k_i| < cutoff * n / 2, evaluated in integers for the default 2/3 rule.
  for (int a = 0; a < grid.dim(); ++a) {
    const int k = std::abs(lat[a]);
    if (cutoff == 2.0 / 3.0) {
      if (3 * k >= grid.n()) return false;
    } else if (static_cast<double>(k) >= cutoff * 0.5 * grid.n()) {
      return false;
    }
  }
  return true;
}

std::string DealiasRule::name() const { return kind == Kind::two_thirds ? "two_thirds" : "none"; }

SpectralField dealias(const SpectralField& v, const DealiasRule& rule) {
  const Grid& grid = v.grid();
  SpectralField out = v;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (rule.retains(grid, idx)) continue;
    for (int c = 0; c < v.components(); ++c) out.at(c, idx) = Complex(0.0, 0.0);
  }
  return out;
}

SpectralField bilinear_B(const SpectralField& u_in, const SpectralField& v_in, const DealiasRule& rule) {
  require_same_grid(u_in.grid(), v_in.grid(), "bilinear_B");
  const Grid& grid = u_in.grid();
  const int d = grid.dim();
  const std::size_t size = grid.size();
  const SpectralField u = dealias(u_in, rule);
  const SpectralField v = dealias(v_in, rule);

  std::vector<std::vector<double>> u_phys = u.to_physical();
  std::vector<Complex> spectral(size);
  std::vector<Complex> physical(size);
  std::vector<Complex> product(size);
  SpectralField out(grid);
  for (int i = 0; i < d; ++i) {
    std::fill(product.begin(), product.end(), Complex(0.0, 0.0));
    const auto vi = v.component(i);
    for (int j = 0; j < d; ++j) {
      for (std::size_t idx = 0; idx < size; ++idx)
        spectral[idx] = Complex(0.0, grid.wavevector(idx)[j]) * vi[idx];
      fft::inverse(grid, spectral, physical);
      const auto& uj = u_phys[static_cast<std::size_t>(j)];
      for (std::size_t x = 0; x < size; ++x) product[x] += uj[x] * physical[x].real();
    }
    fft::forward(grid, product, out.component(i));
  }
  return leray_project(dealias(out, rule));
}

SpectralField mollify(const MollifierParam& m, const SpectralField& u) {
  if (!(m.m > 0.0)) throw Error("mollify: m must be positive");
  if (!m.is_finite()) {
    SpectralField out = u;
    zero_nyquist(out);
    return out;
  }
  const double inv = 1.0 / (2.0 * m.m);
  return apply_multiplier(u, [inv](double k2) { return std::exp(-k2 * inv); });
}

SpectralField bilinear_Bm(const MollifierParam& m, const SpectralField& u, const SpectralField& v,
                          const DealiasRule& rule) {
  return bilinear_B(mollify(m, u), v, rule);
}

double rho_lp_norm(double m, double p) {
  if (!(m > 0.0)) throw Error("rho_lp_norm: m must be positive");
  if (!(p >= 1.0)) throw Error("rho_lp_norm: p must be >= 1");
  const double two_pi = 2.0 * std::numbers::pi;
  return std::pow(m / two_pi, 1.5) * std::pow(two_pi / (m * p), 1.5 / p);
}

namespace {

void record(RatioSummary& summary, double lhs, double rhs) {
  if (!(rhs > 0.0)) {
    ++summary.skipped;
    return;
  }
  ++summary.evaluated;
  summary.max_ratio = std::max(summary.max_ratio, lhs / rhs);
}

}  // namespace

BBoundReport check_B_bounds(std::span<const FieldPair> samples, const MollifierParam& m, double g,
                            const DealiasRule& rule) {
  BBoundReport report;
  const double rough = 0.5 * (1.0 - g);
  const bool finite = m.is_finite();
  const double rho2 = finite ? rho_lp_norm(m.m, 2.0) : 0.0;
  const double rho_rough = finite ? rho_lp_norm(m.m, 6.0 / (4.0 + g)) : 0.0;
  for (const auto& [u, v] : samples) {
    const SpectralField b = bilinear_Bm(m, u, v, rule);
    const double b_hm1 = sobolev_norm(-1.0, b);
    record(report.l4, b_hm1, lp_norm(4.0, u) * lp_norm(4.0, v));
    if (!finite) {
      ++report.rho_l2.skipped;
      ++report.rough_v.skipped;
      ++report.rough_u.skipped;
      continue;
    }
    const double u_h = sobolev_norm(0.0, u);
    const double v_h = sobolev_norm(0.0, v);
    const double b_rough = sobolev_norm(-1.0 - g, b);
    record(report.rho_l2, b_hm1, rho2 * u_h * v_h);
    record(report.rough_v, b_rough, rho_rough * u_h * sobolev_norm(rough, v));
    record(report.rough_u, b_rough, rho_rough * sobolev_norm(rough, u) * v_h);
  }
  return report;
}

bool refinement_stable(const RatioSummary& coarse, const RatioSummary& fine, double rel_tol) {
  if (coarse.evaluated == 0 || fine.evaluated == 0) return coarse.evaluated == fine.evaluated;
  if (coarse.max_ratio == 0.0) return fine.max_ratio == 0.0;
  return std::abs(fine.max_ratio - coarse.max_ratio) <= rel_tol * coarse.max_ratio;
}

}  // namespace sdns
