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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdns/noise_model.hpp"
#include "sdns/nonlinearity.hpp"
#include "sdns/spectral_field.hpp"

namespace sdns {

/// Non-finite state detected; carries the step that produced it.
class BlowUpError : public Error {
 public:
  BlowUpError(std::uint64_t step, const std::string& what);
  std::uint64_t step() const { return step_; }

 private:
  std::uint64_t step_;
};

struct SolverConfig {
  explicit SolverConfig(const Grid& grid);

  Grid grid;
  double nu = 1.0;
  double gamma = 1.0;
  /// Extra damping of the stochastic part; the surplus alpha * zeta is fed
  /// back into the u equation so that v is unchanged in law.
  double alpha = 0.0;
  MollifierParam mollifier;
  double dt = 0.01;
  double t_end = 1.0;
  DealiasRule dealias;
  bool nonlinear = true;
  SpectralField forcing;
  NoiseModel noise;
  std::size_t observe_every = 1;
  std::size_t snapshot_every = 0;  ///< 0 disables snapshots
  double delta = 0.5;               ///< Sobolev index of the norm_Hdelta observable

  /// Throws Error naming the offending setting.
  void validate() const;
  std::uint64_t step_count() const;
  /// dt * (nu * k_max^2 + gamma) with k_max the largest resolved wavenumber.
  double stiffness() const;
};

/// Scalar map on v recorded alongside the built-in observables.
struct Functional {
  std::string name;
  std::function<double(const SpectralField&)> eval;
};

/// Terms of the discrete energy balance for u over one step
///   (|u1|^2 - |u0|^2) / (2 dt) + nu |grad u1|^2 + gamma |u1|^2
///     = -<B_m(v1, v1), u1> + <f, u1> + <feed, u1>.
struct EnergyBudget {
  double rate = 0.0;
  double dissipation = 0.0;
  double damping = 0.0;
  double convection = 0.0;  ///< -<B_m(v1, v1), u1>
  double forcing = 0.0;
  double feed = 0.0;
  double residual() const { return rate + dissipation + damping - convection - forcing - feed; }
  /// Largest magnitude among the individual terms.
  double scale() const;
};

struct StepRecord {
  SpectralField u_prev;
  SpectralField u_next;
  SpectralField v_next;
  std::optional<SpectralField> feed;
};

EnergyBudget energy_budget(const StepRecord& record, const SolverConfig& config);
double energy_residual(const StepRecord& record, const SolverConfig& config);

/// Backward Euler for (A + gamma) with explicit convection and forcing:
///   u1 = (u + dt (f - B_m(v, v) + feed)) / (1 + dt (nu |k|^2 + gamma)).
/// `feed` is alpha * zeta in the shifted splitting.
SpectralField u_step(const SpectralField& u, const SpectralField& v, const SolverConfig& config,
                     const SpectralField* feed = nullptr, std::uint64_t step = 0);

/// One trajectory of the splitting v = z + u with z(0) = 0, u(0) = x.
/// Per step: exact OU step for z with G frozen at v^n (damping gamma, or
/// gamma + alpha when alpha > 0), then u_step, then v = z + u.
class Stepper {
 public:
  Stepper(std::shared_ptr<const SolverConfig> config, const SpectralField& initial, std::uint64_t trajectory = 0);

  void advance();
  void advance(const WienerIncrement& xi);

  const SolverConfig& config() const { return *config_; }
  std::uint64_t step() const { return step_; }
  double time() const { return static_cast<double>(step_) * config_->dt; }
  const SpectralField& u() const { return u_; }
  const SpectralField& z() const { return z_; }
  const SpectralField& v() const { return v_; }
  /// Budget of the most recent step (all zero before the first step).
  const EnergyBudget& last_budget() const { return budget_; }
  NoiseStream stream() const { return stream_; }

 private:
  SpectralField convection(const SpectralField& v) const;

  std::shared_ptr<const SolverConfig> config_;
  NoiseStream stream_;
  OuPropagator propagator_;
  std::vector<double> implicit_;
  SpectralField u_;
  SpectralField z_;
  SpectralField v_;
  SpectralField bv_;  // B_m(v, v) at the current state
  EnergyBudget budget_;
  std::uint64_t step_ = 0;
};

struct ObservableRow {
  double time = 0.0;
  double norm_H = 0.0;
  double norm_L4 = 0.0;
  double norm_Hdelta = 0.0;
  double grad_u_L2 = 0.0;
  double z_L4 = 0.0;             ///< NaN when z observables are not recorded
  double energy_residual = 0.0;  ///< NaN at t = 0
  double u_H = 0.0;
};

struct Trajectory {
  std::vector<ObservableRow> rows;
  std::vector<std::string> functional_names;
  std::vector<std::vector<double>> functional_values;  ///< [functional][row]
  std::vector<TimedField> snapshots;                   ///< v at the snapshot cadence
  std::vector<TimedField> z_snapshots;
  double initial_norm_H = 0.0;
  double forcing_h_minus1 = 0.0;

  std::vector<double> times() const;
  std::vector<double> column(double ObservableRow::*member) const;
  const std::vector<double>& functional(const std::string& name) const;
};

struct SimulateOptions {
  std::uint64_t trajectory = 0;
  std::vector<Functional> functionals;
  bool record_z = true;
  bool snapshot_z = false;
};

Trajectory simulate(const SolverConfig& config, const SpectralField& initial, const SimulateOptions& options = {});

/// Runs members 0..count-1 (trajectory index = member) on a worker pool.
std::vector<Trajectory> simulate_ensemble(const SolverConfig& config, const SpectralField& initial, std::size_t count,
                                          std::size_t workers, const SimulateOptions& options = {});

/// Driver for zeta statistics: sample s replays trajectory s of the full
/// system, so G(v) sees the same increments as the convolution itself.
DriverFactory coupled_driver(const SolverConfig& config, const SpectralField& initial);

struct GronwallReport {
  double sup_u2 = 0.0;        ///< max_t |u(t)|_H^2
  double psi = 0.0;           ///< |x|^2 + C5 int |z|_L4^4 + C5 int |f|_{H^-1}^2
  double phi = 0.0;           ///< C6 int |z|_L4^8
  double envelope = 0.0;      ///< psi exp(phi)
  double grad_integral = 0.0; ///< int |grad u|^2
  double grad_budget = 0.0;   ///< psi + phi psi exp(phi)
  /// Worst of |u(t)|^2 / (psi(t) exp(phi(t))) over recorded t, with psi and
  /// phi accumulated up to t.
  double worst_ratio = 0.0;
  bool holds_sup = false;
  bool holds_grad = false;
  bool holds() const { return holds_sup && holds_grad; }
};

GronwallReport gronwall_envelope_check(const Trajectory& trajectory, double c5, double c6);

struct ContractionOptions {
  std::uint64_t trajectory = 0;
  double tolerance = 1e-3;               ///< per-step slack relative to the initial weighted value
  std::size_t calibration_samples = 48;
  std::optional<double> m_hat;           ///< skip calibration when given
};

struct ContractionReport {
  std::vector<double> times;
  std::vector<double> distance;  ///< |V(t)|_{H^-g}^2
  std::vector<double> weighted;  ///< exp(-int sigma) |V(t)|_{H^-g}^2
  double m_hat = 0.0;
  double lipschitz = 0.0;
  double max_step_increase = 0.0;  ///< max_n (W_{n+1} - W_n) / W_0 (0 when W_0 = 0)
  bool identical = false;          ///< both paths bitwise equal at every step
  bool non_increasing = false;
};

/// Worst observed ratio (|T| - min(nu, gamma)/2 |V|_{H^{1-g}}^2) /
/// ((|v| + |w|)^{4/(1-g)} |V|_{H^-g}^2), V = v - w, T = <B_m(V, v) + B_m(w, V), V>_{H^-g},
/// clipped at zero.
double calibrate_contraction_constant(const SolverConfig& config, std::span<const FieldPair> samples);

/// Runs both initial data with the same increments and tracks the weighted
/// H^{-g} distance.  Additive noise only.
ContractionReport twin_run_contraction(const SolverConfig& config, const SpectralField& ic1, const SpectralField& ic2,
                                       const ContractionOptions& options = {});

}  // namespace sdns
