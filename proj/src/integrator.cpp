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

#include "sdns/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sdns/parallel.hpp"
#include "sdns/random_fields.hpp"
#include "sdns/spectral_ops.hpp"
#include "sdns/stats.hpp"

namespace sdns {

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SDNS_WORKERS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return 1;
}

BlowUpError::BlowUpError(std::uint64_t step, const std::string& what)
    : Error("blow-up at step " + std::to_string(step) + ": " + what), step_(step) {}

SolverConfig::SolverConfig(const Grid& g) : grid(g), forcing(g), noise(NoiseModel::silent(g)) {}

void SolverConfig::validate() const {
  if (!(nu > 0.0)) throw Error("solver.nu must be positive");
  if (!(gamma > 0.0)) throw Error("solver.gamma must be positive");
  if (!(alpha >= 0.0)) throw Error("solver.alpha must be non-negative");
  if (!(dt > 0.0)) throw Error("solver.dt must be positive");
  if (!(t_end > 0.0)) throw Error("solver.t_end must be positive");
  if (!(mollifier.m > 0.0)) throw Error("solver.mollifier must be positive");
  if (grid.dim() == 3 && nonlinear && !mollifier.is_finite())
    throw Error("solver.mollifier: d = 3 requires a finite mollifier m (the mollified B_m system is the well-posed one)");
  if (observe_every == 0) throw Error("solver.observe_every must be at least 1");
  if (!(forcing.grid() == grid)) throw Error("forcing grid does not match grid");
  if (!(noise.grid() == grid)) throw Error("noise grid does not match grid");
  if (!forcing.is_finite()) throw Error("forcing must be finite");
  const double steps = t_end / dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps))
    throw Error("solver.t_end must be an integer multiple of solver.dt");
}

std::uint64_t SolverConfig::step_count() const { return static_cast<std::uint64_t>(std::llround(t_end / dt)); }

double SolverConfig::stiffness() const {
  const double kmax = grid.k_unit() * (grid.n() / 2 - 1);
  return dt * (nu * grid.dim() * kmax * kmax + gamma);
}

double EnergyBudget::scale() const {
  return std::max({std::abs(rate), std::abs(dissipation), std::abs(damping), std::abs(convection), std::abs(forcing),
                   std::abs(feed)});
}

namespace {

EnergyBudget budget_from(const SpectralField& u_prev, const SpectralField& u_next, const SpectralField& b_next,
                         const SpectralField* feed, const SolverConfig& cfg) {
  EnergyBudget b;
  const double e0 = inner_product(u_prev, u_prev);
  const double e1 = inner_product(u_next, u_next);
  const double g1 = grad_l2_norm(u_next);
  b.rate = 0.5 * (e1 - e0) / cfg.dt;
  b.dissipation = cfg.nu * g1 * g1;
  b.damping = cfg.gamma * e1;
  b.convection = -inner_product(b_next, u_next);
  b.forcing = inner_product(cfg.forcing, u_next);
  b.feed = feed ? inner_product(*feed, u_next) : 0.0;
  return b;
}

SpectralField convection_term(const SpectralField& v, const SolverConfig& cfg) {
  if (!cfg.nonlinear) return SpectralField(cfg.grid);
  return bilinear_Bm(cfg.mollifier, v, v, cfg.dealias);
}

std::vector<double> implicit_factors(const SolverConfig& cfg) {
  std::vector<double> out(cfg.grid.size());
  for (std::size_t idx = 0; idx < out.size(); ++idx)
    out[idx] = cfg.grid.is_nyquist(idx) ? 0.0 : 1.0 / (1.0 + cfg.dt * (cfg.nu * cfg.grid.k_squared(idx) + cfg.gamma));
  return out;
}

SpectralField linear_update(const SpectralField& u, const SpectralField& bv, const SpectralField* feed,
                            const SolverConfig& cfg, const std::vector<double>& implicit, std::uint64_t step) {
  SpectralField out(cfg.grid);
  const double dt = cfg.dt;
  for (int c = 0; c < cfg.grid.dim(); ++c) {
    const auto uc = u.component(c);
    const auto bc = bv.component(c);
    const auto fc = cfg.forcing.component(c);
    auto oc = out.component(c);
    for (std::size_t idx = 0; idx < oc.size(); ++idx) {
      Complex rhs = fc[idx] - bc[idx];
      if (feed) rhs += feed->at(c, idx);
      oc[idx] = (uc[idx] + dt * rhs) * implicit[idx];
    }
  }
  if (!out.is_finite()) throw BlowUpError(step, "non-finite mode in u");
  return out;
}

}  // namespace

EnergyBudget energy_budget(const StepRecord& record, const SolverConfig& config) {
  const SpectralField b = convection_term(record.v_next, config);
  return budget_from(record.u_prev, record.u_next, b, record.feed ? &*record.feed : nullptr, config);
}

double energy_residual(const StepRecord& record, const SolverConfig& config) {
  return energy_budget(record, config).residual();
}

SpectralField u_step(const SpectralField& u, const SpectralField& v, const SolverConfig& config,
                     const SpectralField* feed, std::uint64_t step) {
  require_same_grid(config.grid, u.grid(), "u_step");
  require_same_grid(config.grid, v.grid(), "u_step");
  return linear_update(u, convection_term(v, config), feed, config, implicit_factors(config), step);
}

Stepper::Stepper(std::shared_ptr<const SolverConfig> config, const SpectralField& initial, std::uint64_t trajectory)
    : config_(std::move(config)),
      stream_{config_->noise.seed(), trajectory},
      propagator_(config_->noise, config_->dt, config_->nu, config_->gamma + config_->alpha),
      implicit_(implicit_factors(*config_)),
      u_(initial),
      z_(config_->grid),
      v_(initial),
      bv_(config_->grid) {
  config_->validate();
  require_same_grid(config_->grid, initial.grid(), "initial condition");
  if (!initial.is_finite()) throw Error("initial condition must be finite");
  zero_nyquist(u_);
  v_ = u_;
  bv_ = convection(v_);
}

SpectralField Stepper::convection(const SpectralField& v) const { return convection_term(v, *config_); }

void Stepper::advance() {
  if (config_->noise.is_silent()) {
    // Skip sampling; the propagator only applies the decay.
    WienerIncrement none;
    none.dt = config_->dt;
    none.xi.assign(3 * config_->grid.size(), Complex(0.0, 0.0));
    advance(none);
    return;
  }
  advance(sample_increment(config_->noise, config_->dt, stream_, step_));
}

void Stepper::advance(const WienerIncrement& xi) {
  const SolverConfig& cfg = *config_;
  propagator_.step(z_, v_, xi);
  if (!z_.is_finite()) throw BlowUpError(step_, "non-finite mode in z");
  std::optional<SpectralField> feed;
  if (cfg.alpha > 0.0) feed = cfg.alpha * z_;
  SpectralField u_next = linear_update(u_, bv_, feed ? &*feed : nullptr, cfg, implicit_, step_);
  v_ = z_ + u_next;
  bv_ = convection(v_);
  if (!bv_.is_finite()) throw BlowUpError(step_, "non-finite convection term");
  budget_ = budget_from(u_, u_next, bv_, feed ? &*feed : nullptr, cfg);
  u_ = std::move(u_next);
  ++step_;
}

std::vector<double> Trajectory::times() const { return column(&ObservableRow::time); }

std::vector<double> Trajectory::column(double ObservableRow::*member) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.*member);
  return out;
}

const std::vector<double>& Trajectory::functional(const std::string& name) const {
  for (std::size_t i = 0; i < functional_names.size(); ++i)
    if (functional_names[i] == name) return functional_values[i];
  throw Error("trajectory has no functional '" + name + "'");
}

namespace {

void record(const Stepper& s, const SimulateOptions& opt, bool first, Trajectory& traj) {
  const SolverConfig& cfg = s.config();
  ObservableRow row;
  row.time = s.time();
  row.norm_H = sobolev_norm(0.0, s.v());
  row.norm_L4 = lp_norm(4.0, s.v());
  row.norm_Hdelta = sobolev_norm(cfg.delta, s.v());
  row.grad_u_L2 = grad_l2_norm(s.u());
  row.z_L4 = opt.record_z ? lp_norm(4.0, s.z()) : std::numeric_limits<double>::quiet_NaN();
  row.energy_residual = first ? std::numeric_limits<double>::quiet_NaN() : s.last_budget().residual();
  row.u_H = sobolev_norm(0.0, s.u());
  traj.rows.push_back(row);
  for (std::size_t j = 0; j < opt.functionals.size(); ++j)
    traj.functional_values[j].push_back(opt.functionals[j].eval(s.v()));
}

}  // namespace

Trajectory simulate(const SolverConfig& config, const SpectralField& initial, const SimulateOptions& options) {
  auto cfg = std::make_shared<const SolverConfig>(config);
  Stepper stepper(cfg, initial, options.trajectory);
  Trajectory traj;
  traj.initial_norm_H = sobolev_norm(0.0, stepper.u());
  const double fn = sobolev_norm(-1.0, config.forcing);
  traj.forcing_h_minus1 = fn;
  for (const auto& f : options.functionals) traj.functional_names.push_back(f.name);
  traj.functional_values.assign(options.functionals.size(), {});

  const std::uint64_t steps = config.step_count();
  auto snap = [&] {
    if (config.snapshot_every == 0 || stepper.step() % config.snapshot_every != 0) return;
    traj.snapshots.push_back({stepper.time(), stepper.v()});
    if (options.snapshot_z) traj.z_snapshots.push_back({stepper.time(), stepper.z()});
  };
  record(stepper, options, true, traj);
  snap();
  while (stepper.step() < steps) {
    stepper.advance();
    if (stepper.step() % config.observe_every == 0 || stepper.step() == steps) record(stepper, options, false, traj);
    snap();
  }
  return traj;
}

std::vector<Trajectory> simulate_ensemble(const SolverConfig& config, const SpectralField& initial, std::size_t count,
                                          std::size_t workers, const SimulateOptions& options) {
  const std::function<Trajectory(std::size_t)> task = [&](std::size_t i) {
    SimulateOptions opt = options;
    opt.trajectory = options.trajectory + i;
    return simulate(config, initial, opt);
  };
  return parallel_map(count, resolve_workers(workers), task);
}

DriverFactory coupled_driver(const SolverConfig& config, const SpectralField& initial) {
  auto cfg = std::make_shared<const SolverConfig>(config);
  return [cfg, initial](std::uint64_t sample) -> DriverPath {
    auto stepper = std::make_shared<Stepper>(cfg, initial, sample);
    return [stepper](std::uint64_t step) {
      if (step < stepper->step()) throw Error("coupled driver: steps must be requested in increasing order");
      while (stepper->step() < step) stepper->advance();
      return stepper->v();
    };
  };
}

GronwallReport gronwall_envelope_check(const Trajectory& traj, double c5, double c6) {
  if (traj.rows.size() < 2) throw Error("gronwall_envelope_check: need at least two recorded rows");
  for (const auto& r : traj.rows)
    if (std::isnan(r.z_L4)) throw Error("gronwall_envelope_check: trajectory has no z observables");
  const std::size_t n = traj.rows.size();
  GronwallReport rep;
  const double x2 = traj.initial_norm_H * traj.initial_norm_H;
  const double f2 = traj.forcing_h_minus1 * traj.forcing_h_minus1;
  double z4 = 0.0, z8 = 0.0, grad = 0.0;
  double envelope_t = x2;
  rep.worst_ratio = 0.0;  // t = 0 is an identity; only later times are informative
  rep.sup_u2 = traj.rows[0].u_H * traj.rows[0].u_H;
  for (std::size_t i = 1; i < n; ++i) {
    const auto& a = traj.rows[i - 1];
    const auto& b = traj.rows[i];
    const double h = b.time - a.time;
    z4 += 0.5 * h * (std::pow(a.z_L4, 4) + std::pow(b.z_L4, 4));
    z8 += 0.5 * h * (std::pow(a.z_L4, 8) + std::pow(b.z_L4, 8));
    grad += 0.5 * h * (a.grad_u_L2 * a.grad_u_L2 + b.grad_u_L2 * b.grad_u_L2);
    const double psi = x2 + c5 * z4 + c5 * f2 * (b.time - traj.rows[0].time);
    const double phi = c6 * z8;
    envelope_t = psi * std::exp(phi);
    const double u2 = b.u_H * b.u_H;
    rep.sup_u2 = std::max(rep.sup_u2, u2);
    if (envelope_t > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, u2 / envelope_t);
    else if (u2 > 0.0) rep.worst_ratio = std::numeric_limits<double>::infinity();
    rep.psi = psi;
    rep.phi = phi;
  }
  rep.envelope = envelope_t;
  rep.grad_integral = grad;
  rep.grad_budget = rep.psi + rep.phi * rep.psi * std::exp(rep.phi);
  rep.holds_sup = rep.worst_ratio <= 1.0;
  rep.holds_grad = rep.grad_integral <= rep.grad_budget;
  return rep;
}

namespace {

double contraction_ratio(const SolverConfig& cfg, const SpectralField& v, const SpectralField& w) {
  const double g = cfg.noise.g();
  const SpectralField V = v - w;
  const double dist = sobolev_norm(-g, V);
  if (dist == 0.0) return 0.0;
  SpectralField t = bilinear_Bm(cfg.mollifier, V, v, cfg.dealias);
  t += bilinear_Bm(cfg.mollifier, w, V, cfg.dealias);
  const double tv = std::abs(sobolev_inner_product(-g, t, V));
  const double smooth = sobolev_norm(1.0 - g, V);
  const double num = tv - 0.5 * std::min(cfg.nu, cfg.gamma) * smooth * smooth;
  const double size = sobolev_norm(0.0, v) + sobolev_norm(0.0, w);
  const double den = std::pow(size, 4.0 / (1.0 - g)) * dist * dist;
  if (!(den > 0.0)) return 0.0;
  return std::max(0.0, num / den);
}

}  // namespace

double calibrate_contraction_constant(const SolverConfig& config, std::span<const FieldPair> samples) {
  double worst = 0.0;
  for (const auto& [v, w] : samples) worst = std::max(worst, contraction_ratio(config, v, w));
  return worst;
}

ContractionReport twin_run_contraction(const SolverConfig& config, const SpectralField& ic1, const SpectralField& ic2,
                                       const ContractionOptions& options) {
  if (!config.noise.additive()) throw Error("twin_run_contraction: multiplicative noise is not supported");
  config.validate();
  const Grid& grid = config.grid;
  const double g = config.noise.g();

  ContractionReport rep;
  rep.lipschitz = config.noise.lipschitz_constant();
  if (options.m_hat) {
    rep.m_hat = *options.m_hat;
  } else {
    // Pairs spanning 0.25x to 4x the run scale, plus the initial data and
    // single low modes.
    const double scale = std::max({sobolev_norm(0.0, ic1), sobolev_norm(0.0, ic2), config.noise.k_g2(), 1e-3});
    std::vector<FieldPair> samples;
    samples.emplace_back(ic1, ic2);
    const std::size_t count = std::max<std::size_t>(options.calibration_samples, 4);
    for (std::size_t i = 0; i < count; ++i) {
      const double level = scale * std::pow(16.0, static_cast<double>(i % 5) / 4.0) / 4.0;
      RandomFieldSpec spec;
      spec.slope = 1.0 + static_cast<double>(i % 3);
      spec.l2_norm = level;
      SpectralField v = random_solenoidal_field(grid, spec, config.noise.seed() + 7919, 2 * i);
      spec.l2_norm = level * std::pow(10.0, -static_cast<double>(i % 4));
      SpectralField dv = random_solenoidal_field(grid, spec, config.noise.seed() + 7919, 2 * i + 1);
      samples.emplace_back(v, v - dv);
    }
    for (int a = 1; a <= 2; ++a) {
      std::array<int, 3> k{a, 0, 0};
      std::array<int, 3> q{0, 1, 0};
      samples.emplace_back(single_mode_field(grid, k, scale), single_mode_field(grid, q, scale));
    }
    rep.m_hat = calibrate_contraction_constant(config, samples);
  }

  auto cfg = std::make_shared<const SolverConfig>(config);
  Stepper a(cfg, ic1, options.trajectory);
  Stepper b(cfg, ic2, options.trajectory);
  const double exponent = 4.0 / (1.0 - g);
  auto sigma = [&] {
    const double s = sobolev_norm(0.0, a.v()) + sobolev_norm(0.0, b.v());
    return rep.lipschitz * rep.lipschitz + 2.0 * rep.m_hat * std::pow(s, exponent);
  };
  auto dist = [&] {
    const double d = sobolev_norm(-g, a.v() - b.v());
    return d * d;
  };
  rep.identical = a.v().coeffs() == b.v().coeffs();
  double integral = 0.0;
  double sig = sigma();
  rep.times.push_back(0.0);
  rep.distance.push_back(dist());
  rep.weighted.push_back(rep.distance.back());
  const std::uint64_t steps = config.step_count();
  for (std::uint64_t n = 0; n < steps; ++n) {
    if (config.noise.is_silent()) {
      a.advance();
      b.advance();
    } else {
      const WienerIncrement xi = sample_increment(config.noise, config.dt, a.stream(), n);
      a.advance(xi);
      b.advance(xi);
    }
    rep.identical = rep.identical && a.v().coeffs() == b.v().coeffs();
    const double sig_next = sigma();
    integral += 0.5 * config.dt * (sig + sig_next);
    sig = sig_next;
    rep.times.push_back(a.time());
    rep.distance.push_back(dist());
    rep.weighted.push_back(std::exp(-integral) * rep.distance.back());
  }
  const double w0 = rep.weighted.front();
  double worst = 0.0;
  for (std::size_t i = 1; i < rep.weighted.size(); ++i) worst = std::max(worst, rep.weighted[i] - rep.weighted[i - 1]);
  rep.max_step_increase = w0 > 0.0 ? worst / w0 : (worst > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  rep.non_increasing = rep.max_step_increase <= options.tolerance;
  return rep;
}

}  // namespace sdns
