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

#include "sdns/noise_model.hpp"

#include <algorithm>
#include <cmath>

#include "sdns/random_fields.hpp"
#include "sdns/rng.hpp"
#include "sdns/spectral_ops.hpp"

namespace sdns {

Saturation parse_saturation(const std::string& name) {
  if (name == "one") return Saturation::one;
  if (name == "tanh") return Saturation::tanh;
  throw Error("unknown saturation '" + name + "' (expected one or tanh)");
}

std::string to_string(Saturation psi) { return psi == Saturation::one ? "one" : "tanh"; }

NoiseModel::NoiseModel(Grid grid, std::vector<double> amplitudes, double g, Saturation psi, std::uint64_t seed)
    : grid_(std::move(grid)), amplitude_(std::move(amplitudes)), g_(g), psi_(psi), seed_(seed) {
  if (!(g_ > 0.0 && g_ < 1.0)) throw Error("noise: g must lie in (0, 1)");
  if (amplitude_.size() != grid_.size()) throw Error("noise: amplitude table does not match the grid");
  basis_.assign(3 * grid_.size(), {0.0, 0.0, 0.0});
  basis_count_.assign(grid_.size(), 0);
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    const double c = amplitude_[idx];
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error("noise: amplitudes must be finite and non-negative");
    if (grid_.is_nyquist(idx)) amplitude_[idx] = 0.0;
    if (amplitude_[idx] == 0.0) continue;
    if (amplitude_[grid_.mirror(idx)] != c) throw Error("noise: amplitudes must satisfy c(-k) = c(k)");
    active_.push_back(idx);
    const auto basis = polarization_basis(grid_.dim(), grid_.wavevector(canonical_index(idx)));
    basis_count_[idx] = static_cast<unsigned char>(basis.size());
    std::copy(basis.begin(), basis.end(), basis_.begin() + static_cast<std::ptrdiff_t>(3 * idx));
  }
}

NoiseModel NoiseModel::power_law(const Grid& grid, const NoiseParams& params) {
  if (params.c0 < 0.0 || params.r < 0.0) throw Error("noise: c0 and r must be non-negative");
  std::vector<double> amps(grid.size(), 0.0);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.is_nyquist(idx) || grid.k_squared(idx) == 0.0) continue;
    amps[idx] = params.c0 * std::pow(1.0 + grid.k_squared(idx), -0.5 * params.r);
  }
  return NoiseModel(grid, std::move(amps), params.g, params.psi, params.seed);
}

NoiseModel NoiseModel::single_mode(const Grid& grid, const std::array<int, 3>& k, double c, double g, Saturation psi,
                                   std::uint64_t seed) {
  std::vector<double> amps(grid.size(), 0.0);
  const std::size_t idx = grid.index_of(k);
  amps[idx] = c;
  amps[grid.mirror(idx)] = c;
  return NoiseModel(grid, std::move(amps), g, psi, seed);
}

NoiseModel NoiseModel::from_amplitudes(const Grid& grid, std::vector<double> amplitudes, double g, Saturation psi,
                                       std::uint64_t seed) {
  return NoiseModel(grid, std::move(amplitudes), g, psi, seed);
}

NoiseModel NoiseModel::silent(const Grid& grid, double g) {
  return NoiseModel(grid, std::vector<double>(grid.size(), 0.0), g, Saturation::one, 0);
}

std::span<const std::array<double, 3>> NoiseModel::polarizations(std::size_t idx) const {
  return {basis_.data() + 3 * idx, basis_count_[idx]};
}

std::size_t NoiseModel::canonical_index(std::size_t idx) const {
  return grid_.is_canonical(idx) || grid_.k_squared(idx) == 0.0 ? idx : grid_.mirror(idx);
}

double NoiseModel::psi(double x) const { return psi_ == Saturation::one ? 1.0 : std::tanh(x); }

double NoiseModel::k_g2() const {
  double sum = 0.0;
  for (std::size_t idx : active_) {
    const double c = amplitude_[idx];
    sum += basis_count_[idx] * c * c * std::pow(1.0 + grid_.k_squared(idx), -g_);
  }
  return sup_psi() * std::sqrt(sum);
}

double NoiseModel::k_g4_surrogate() const {
  // Each real basis element phi satisfies |phi(x)|^2 summed over a cos/sin
  // pair = 2 e_i^2 / L^d, so the square function is constant in x.
  std::array<double, 3> s2{0.0, 0.0, 0.0};
  const double inv_vol = 1.0 / grid_.volume();
  for (std::size_t idx : active_) {
    const double c = amplitude_[idx];
    const double w = c * c * std::pow(1.0 + grid_.k_squared(idx), -g_) * inv_vol;
    for (const auto& e : polarizations(idx))
      for (int i = 0; i < grid_.dim(); ++i) s2[i] += w * e[i] * e[i];
  }
  double sum4 = 0.0;
  for (int i = 0; i < grid_.dim(); ++i) sum4 += s2[i] * s2[i];
  return sup_psi() * std::pow(sum4 * grid_.volume(), 0.25);
}

double NoiseModel::lipschitz_constant() const {
  double worst = 0.0;
  for (std::size_t idx : active_) {
    const double mult = grid_.k_squared(idx) == 0.0 ? 1.0 : 2.0;
    worst = std::max(worst, mult * amplitude_[idx] * amplitude_[idx]);
  }
  return lip_psi() * std::sqrt(worst);
}

std::vector<double> NoiseModel::saturation_values(const SpectralField& v) const {
  require_same_grid(grid_, v.grid(), "saturation_values");
  std::vector<double> out(3 * grid_.size(), 1.0);
  if (additive()) return out;
  const double root_vol = std::sqrt(grid_.volume());
  for (std::size_t idx : active_) {
    if (canonical_index(idx) != idx) continue;
    const bool mean_mode = grid_.k_squared(idx) == 0.0;
    const auto pols = polarizations(idx);
    for (std::size_t a = 0; a < pols.size(); ++a) {
      double proj = 0.0;
      for (int c = 0; c < grid_.dim(); ++c) proj += pols[a][c] * v.at(c, idx).real();
      const double probe = (mean_mode ? 1.0 : std::sqrt(2.0)) * root_vol * proj;
      out[3 * idx + a] = psi(probe);
    }
  }
  return out;
}

WienerIncrement sample_increment(const NoiseModel& model, double dt, const NoiseStream& stream, std::uint64_t step) {
  if (!(dt > 0.0)) throw Error("sample_increment: dt must be positive");
  const Grid& grid = model.grid();
  WienerIncrement out;
  out.dt = dt;
  out.xi.assign(3 * grid.size(), Complex(0.0, 0.0));
  const GaussianStream gauss(stream.seed, StreamTag::noise, stream.trajectory);
  const double half = std::sqrt(0.5 * dt);
  const double full = std::sqrt(dt);
  for (std::size_t idx : model.active_modes()) {
    if (model.canonical_index(idx) != idx) continue;
    const bool mean_mode = grid.k_squared(idx) == 0.0;
    const std::size_t count = model.polarizations(idx).size();
    for (std::size_t a = 0; a < count; ++a) {
      const auto lane = static_cast<std::uint32_t>(3 * idx + a);
      const auto [g1, g2] = gauss.at(step, lane);
      if (mean_mode) {
        out.xi[3 * idx + a] = Complex(full * g1, 0.0);
      } else {
        const Complex value(half * g1, half * g2);
        out.xi[3 * idx + a] = value;
        out.xi[3 * grid.mirror(idx) + a] = std::conj(value);
      }
    }
  }
  return out;
}

namespace {

// Accumulates gain(idx) * c_k * psi_k * xi_k * e_k into `out`.
template <class Gain>
void add_noise(const NoiseModel& model, const std::vector<double>& psi, const WienerIncrement& xi, Gain gain,
               SpectralField& out) {
  const Grid& grid = model.grid();
  for (std::size_t idx : model.active_modes()) {
    const std::size_t canon = model.canonical_index(idx);
    const auto pols = model.polarizations(idx);
    const double scale = gain(idx) * model.amplitude(idx);
    for (std::size_t a = 0; a < pols.size(); ++a) {
      const Complex w = scale * psi[3 * canon + a] * xi.xi[3 * idx + a];
      for (int c = 0; c < grid.dim(); ++c) out.at(c, idx) += w * pols[a][c];
    }
  }
}

}  // namespace

SpectralField apply_G(const NoiseModel& model, const SpectralField& v, const WienerIncrement& xi) {
  require_same_grid(model.grid(), v.grid(), "apply_G");
  if (xi.xi.size() != 3 * model.grid().size()) throw Error("apply_G: increment does not match the grid");
  SpectralField out(model.grid());
  const double inv_root_vol = 1.0 / std::sqrt(model.grid().volume());
  add_noise(model, model.saturation_values(v), xi, [&](std::size_t) { return inv_root_vol; }, out);
  return out;
}

double hs_norm_G(const NoiseModel& model, const SpectralField& v) {
  const auto psi = model.saturation_values(v);
  const Grid& grid = model.grid();
  double sum = 0.0;
  for (std::size_t idx : model.active_modes()) {
    const std::size_t canon = model.canonical_index(idx);
    const double c = model.amplitude(idx);
    const double w = c * c * std::pow(1.0 + grid.k_squared(idx), -model.g());
    for (std::size_t a = 0; a < model.polarizations(idx).size(); ++a) sum += w * psi[3 * canon + a] * psi[3 * canon + a];
  }
  return std::sqrt(sum);
}

double hs_distance_G(const NoiseModel& model, const SpectralField& v1, const SpectralField& v2) {
  const auto p1 = model.saturation_values(v1);
  const auto p2 = model.saturation_values(v2);
  const Grid& grid = model.grid();
  double sum = 0.0;
  for (std::size_t idx : model.active_modes()) {
    const std::size_t canon = model.canonical_index(idx);
    const double c = model.amplitude(idx);
    const double w = c * c * std::pow(1.0 + grid.k_squared(idx), -model.g());
    for (std::size_t a = 0; a < model.polarizations(idx).size(); ++a) {
      const double d = p1[3 * canon + a] - p2[3 * canon + a];
      sum += w * d * d;
    }
  }
  return std::sqrt(sum);
}

OuPropagator::OuPropagator(const NoiseModel& model, double dt, double nu, double gamma_total)
    : model_(&model), dt_(dt), gamma_total_(gamma_total) {
  if (!(dt > 0.0)) throw Error("OU step: dt must be positive");
  if (!(nu > 0.0)) throw Error("OU step: nu must be positive");
  if (!(gamma_total > 0.0)) throw Error("OU step: gamma_total must be positive (the mean mode needs damping)");
  const Grid& grid = model.grid();
  decay_.resize(grid.size());
  gain_.resize(grid.size());
  const double inv_root_vol = 1.0 / std::sqrt(grid.volume());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double lambda = nu * grid.k_squared(idx) + gamma_total;
    decay_[idx] = grid.is_nyquist(idx) ? 0.0 : std::exp(-lambda * dt);
    // xi already carries variance dt; rescale to (1 - e^{-2 lambda dt}) / (2 lambda).
    gain_[idx] = std::sqrt(-std::expm1(-2.0 * lambda * dt) / (2.0 * lambda * dt)) * inv_root_vol;
  }
}

void OuPropagator::step(SpectralField& z, const SpectralField& v, const WienerIncrement& xi) const {
  const Grid& grid = model_->grid();
  require_same_grid(grid, z.grid(), "OU step");
  if (xi.xi.size() != 3 * grid.size()) throw Error("OU step: increment does not match the grid");
  if (std::abs(xi.dt - dt_) > 1e-14 * dt_) throw Error("OU step: increment dt differs from the propagator dt");
  for (int c = 0; c < grid.dim(); ++c) {
    auto comp = z.component(c);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) comp[idx] *= decay_[idx];
  }
  if (model_->is_silent()) return;
  add_noise(*model_, model_->saturation_values(v), xi, [&](std::size_t idx) { return gain_[idx]; }, z);
}

SpectralField ou_exact_step(const NoiseModel& model, const SpectralField& v, const SpectralField& z,
                            const WienerIncrement& xi, double nu, double gamma_total) {
  SpectralField out = z;
  OuPropagator(model, xi.dt, nu, gamma_total).step(out, v, xi);
  return out;
}

SpectralField ou_exact_step(const NoiseModel& model, const SpectralField& v, const SpectralField& z, double dt,
                            double nu, double gamma_total, const NoiseStream& stream, std::uint64_t step) {
  return ou_exact_step(model, v, z, sample_increment(model, dt, stream, step), nu, gamma_total);
}

bool ZetaAlphaTable::monotone() const {
  return std::all_of(rows.begin(), rows.end(), [](const ZetaAlphaRow& r) { return r.non_increasing; });
}

ZetaAlphaTable zeta_alpha_statistics(const NoiseModel& model, const ZetaSetup& setup, std::span<const double> alphas,
                                     double t_probe, std::size_t n_samples, const DriverFactory& driver) {
  if (n_samples < 10) throw Error("zeta_alpha_statistics: need at least 10 samples");
  if (alphas.empty()) throw Error("zeta_alpha_statistics: empty alpha list");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] < 0.0) throw Error("zeta_alpha_statistics: alpha must be non-negative");
    if (i > 0 && !(alphas[i] > alphas[i - 1])) throw Error("zeta_alpha_statistics: alphas must be increasing");
  }
  if (!(setup.gamma > 0.0)) throw Error("zeta_alpha_statistics: gamma must be positive");
  if (!(std::exp(-2.0 * (setup.gamma + alphas.front()) * t_probe) < 0.01))
    throw Error("zeta_alpha_statistics: t_probe too short for the smallest alpha to forget its initial datum");

  const Grid& grid = model.grid();
  const auto steps = static_cast<std::uint64_t>(std::ceil(t_probe / setup.dt - 1e-9));
  std::vector<OuPropagator> props;
  for (double a : alphas) props.emplace_back(model, setup.dt, setup.nu, setup.gamma + a);

  const std::size_t na = alphas.size();
  std::vector<std::vector<double>> h2(na, std::vector<double>(n_samples));
  std::vector<std::vector<double>> l4(na, std::vector<double>(n_samples));
  const SpectralField zero(grid);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const NoiseStream stream{model.seed(), s};
    DriverPath path = driver ? driver(s) : DriverPath{};
    std::vector<SpectralField> zeta(na, zero);
    for (std::uint64_t n = 0; n < steps; ++n) {
      const WienerIncrement xi = sample_increment(model, setup.dt, stream, n);
      const SpectralField v = path ? path(n) : zero;
      for (std::size_t i = 0; i < na; ++i) props[i].step(zeta[i], v, xi);
    }
    for (std::size_t i = 0; i < na; ++i) {
      const double h = sobolev_norm(0.0, zeta[i]);
      const double q = lp_norm(4.0, zeta[i]);
      h2[i][s] = h * h;
      l4[i][s] = q * q * q * q;
    }
  }

  ZetaAlphaTable table;
  table.t_probe = static_cast<double>(steps) * setup.dt;
  table.n_samples = n_samples;
  for (std::size_t i = 0; i < na; ++i) {
    ZetaAlphaRow row;
    row.alpha = alphas[i];
    row.h2 = stats::mean_se(h2[i]);
    row.l4_4 = stats::mean_se(l4[i]);
    if (i > 0) {
      std::vector<double> diff(n_samples);
      for (std::size_t s = 0; s < n_samples; ++s) diff[s] = h2[i][s] - h2[i - 1][s];
      const auto d = stats::mean_se(diff);
      row.non_increasing = d.mean <= 2.0 * d.se;
    }
    table.rows.push_back(row);
  }
  return table;
}

double zeta_alpha_energy_additive(const NoiseModel& model, const ZetaSetup& setup, double alpha, double t) {
  const Grid& grid = model.grid();
  double sum = 0.0;
  for (std::size_t idx : model.active_modes()) {
    const double lambda = setup.nu * grid.k_squared(idx) + setup.gamma + alpha;
    const double c = model.amplitude(idx);
    sum += model.polarizations(idx).size() * c * c * (-std::expm1(-2.0 * lambda * t)) / (2.0 * lambda);
  }
  return sum;
}

}  // namespace sdns
