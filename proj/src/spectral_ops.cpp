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

#include "sdns/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdns {

SpectralField apply_multiplier(const SpectralField& v, const std::function<double(double)>& factor) {
  const Grid& grid = v.grid();
  SpectralField out(grid);
  std::vector<double> table(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx)
    table[idx] = grid.is_nyquist(idx) ? 0.0 : factor(grid.k_squared(idx));
  for (int c = 0; c < v.components(); ++c) {
    const auto in = v.component(c);
    auto res = out.component(c);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) res[idx] = table[idx] * in[idx];
  }
  return out;
}

SpectralField leray_project(const SpectralField& v) {
  const Grid& grid = v.grid();
  const int d = grid.dim();
  SpectralField out = v;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.is_nyquist(idx)) {
      for (int c = 0; c < d; ++c) out.at(c, idx) = Complex(0.0, 0.0);
      continue;
    }
    const double k2 = grid.k_squared(idx);
    if (k2 == 0.0) continue;
    const auto& k = grid.wavevector(idx);
    Complex kv(0.0, 0.0);
    for (int c = 0; c < d; ++c) kv += k[c] * v.at(c, idx);
    for (int c = 0; c < d; ++c) out.at(c, idx) -= k[c] * kv / k2;
  }
  return out;
}

SpectralField apply_js(double s, const SpectralField& v) {
  return apply_multiplier(v, [s](double k2) { return std::pow(1.0 + k2, 0.5 * s); });
}

double sobolev_inner_product(double s, const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid(), "sobolev_inner_product");
  const Grid& grid = u.grid();
  double sum = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double mode = 0.0;
    for (int c = 0; c < u.components(); ++c) {
      const Complex a = u.at(c, idx);
      const Complex b = v.at(c, idx);
      mode += a.real() * b.real() + a.imag() * b.imag();
    }
    if (mode != 0.0) sum += (s == 0.0 ? 1.0 : std::pow(1.0 + grid.k_squared(idx), s)) * mode;
  }
  return grid.volume() * sum;
}

double inner_product(const SpectralField& u, const SpectralField& v) { return sobolev_inner_product(0.0, u, v); }

double sobolev_norm(double s, const SpectralField& v) { return std::sqrt(std::max(0.0, sobolev_inner_product(s, v, v))); }

double grad_l2_norm(const SpectralField& v) {
  const Grid& grid = v.grid();
  double sum = 0.0;
  for (int c = 0; c < v.components(); ++c) {
    const auto comp = v.component(c);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) sum += grid.k_squared(idx) * std::norm(comp[idx]);
  }
  return std::sqrt(grid.volume() * sum);
}

double lp_norm(double p, const SpectralField& v) {
  if (!(p >= 1.0)) throw Error("lp_norm: p must be >= 1");
  const Grid& grid = v.grid();
  const auto values = v.to_physical();
  const double cell = grid.volume() / static_cast<double>(grid.size());
  if (std::isinf(p)) {
    double total = 0.0;
    for (const auto& comp : values) {
      double m = 0.0;
      for (double x : comp) m = std::max(m, std::abs(x));
      total += m;
    }
    return total;
  }
  double total = 0.0;
  for (const auto& comp : values) {
    double sum = 0.0;
    if (p == 2.0) {
      for (double x : comp) sum += x * x;
    } else if (p == 4.0) {
      for (double x : comp) sum += (x * x) * (x * x);
    } else {
      for (double x : comp) sum += std::pow(std::abs(x), p);
    }
    total += sum * cell;
  }
  return std::pow(total, 1.0 / p);
}

SpectralField semigroup_multiplier(double t, double gamma_eff, double nu, const SpectralField& v) {
  if (t < 0.0) throw Error("semigroup_multiplier: t must be non-negative");
  return apply_multiplier(v, [=](double k2) { return std::exp(-t * (nu * k2 + gamma_eff)); });
}

SpectralField resample(const SpectralField& v, const Grid& target) {
  const Grid& src = v.grid();
  if (src.dim() != target.dim() || src.length() != target.length())
    throw Error("resample: grids differ in dimension or side length");
  SpectralField out(target);
  const int half = std::min(src.n(), target.n()) / 2;
  for (std::size_t idx = 0; idx < src.size(); ++idx) {
    if (src.is_nyquist(idx)) continue;
    const auto& k = src.lattice(idx);
    bool fits = true;
    for (int a = 0; a < src.dim(); ++a) fits = fits && std::abs(k[a]) < half;
    if (!fits) continue;
    const std::size_t t = target.index_of(k);
    for (int c = 0; c < src.dim(); ++c) out.at(c, t) = v.at(c, idx);
  }
  return out;
}

HolderNorm holder_seminorm(double beta, double s, std::span<const TimedField> samples) {
  if (samples.size() < 2) throw Error("holder_seminorm: at least two samples are required");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].time > samples[i - 1].time)) throw Error("holder_seminorm: sample times must increase strictly");

  const Grid& grid = samples.front().field.grid();
  const int d = grid.dim();
  std::vector<double> weight(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx)
    weight[idx] = grid.is_nyquist(idx) ? 0.0 : std::sqrt(grid.volume() * std::pow(1.0 + grid.k_squared(idx), s));

  // Weighted coefficients flattened to reals so each pair distance is a plain sum of squares.
  const std::size_t len = 2 * grid.size() * static_cast<std::size_t>(d);
  std::vector<std::vector<double>> flat(samples.size(), std::vector<double>(len));
  HolderNorm out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require_same_grid(grid, samples[i].field.grid(), "holder_seminorm");
    auto& row = flat[i];
    std::size_t pos = 0;
    double norm2 = 0.0;
    for (int c = 0; c < d; ++c) {
      const auto comp = samples[i].field.component(c);
      for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        row[pos++] = weight[idx] * comp[idx].real();
        row[pos++] = weight[idx] * comp[idx].imag();
      }
    }
    for (double x : row) norm2 += x * x;
    out.sup = std::max(out.sup, std::sqrt(norm2));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      double dist2 = 0.0;
      const auto& a = flat[i];
      const auto& b = flat[j];
      for (std::size_t q = 0; q < len; ++q) {
        const double diff = a[q] - b[q];
        dist2 += diff * diff;
      }
      const double dt = samples[j].time - samples[i].time;
      out.seminorm = std::max(out.seminorm, std::sqrt(dist2) / std::pow(dt, beta));
    }
  }
  return out;
}

}  // namespace sdns
