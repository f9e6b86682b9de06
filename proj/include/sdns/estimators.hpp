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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdns/integrator.hpp"
#include "sdns/spectral_ops.hpp"
#include "sdns/stats.hpp"

namespace sdns {

/// Scalar test functional on H.
struct ObservableSpec {
  enum class Kind { norm_H_squared, norm_L4, energy_band, bounded_test };
  Kind kind = Kind::norm_H_squared;
  double k_lo = 0.0;  ///< energy_band: lo <= |k| < hi (physical units)
  double k_hi = 0.0;
  double radius = 1.0;                 ///< bounded_test: radius^2 tanh((<v, h> / radius)^2)
  std::optional<SpectralField> probe;  ///< bounded_test: the fixed field h
  std::string label;                   ///< bounded_test: name suffix

  static ObservableSpec norm_h_squared();
  static ObservableSpec norm_l4();
  static ObservableSpec energy_band(double lo, double hi);
  static ObservableSpec bounded_test(SpectralField probe, double radius, std::string label);

  std::string name() const;
  double evaluate(const SpectralField& v) const;
  Functional functional() const;
};

/// norm_H_squared, norm_L4, the band 1 <= |k| < 2, and bounded tests on
/// the unit-norm fields cos(x_2) e_1 and cos(x_1) e_2.
std::vector<ObservableSpec> default_panel(const Grid& grid, double radius = 1.0);

/// (1/T) * trapezoid integral of the samples over [t_0, t_0 + T]; the last
/// partial interval is linearly interpolated.
double kb_average(std::span<const double> times, std::span<const double> values, double horizon);
/// Uses the functional recorded under phi.name(), or the built-in columns
/// for norm_H_squared / norm_L4.
double kb_average(const Trajectory& traj, const ObservableSpec& phi, double horizon);
std::vector<double> observable_series(const Trajectory& traj, const ObservableSpec& phi);

struct KBReport {
  std::vector<double> horizons;  ///< T_0 * 2^j
  std::vector<std::string> observables;
  std::vector<std::vector<stats::MeanSe>> averages;  ///< [observable][horizon], over the ensemble
  std::vector<std::vector<double>> gaps;             ///< [observable][j] = |A(T_{j+1}) - A(T_j)|
  std::size_t members = 0;
  /// Gaps strictly decreasing along the doublings.
  bool gaps_decreasing(std::size_t observable) const;
};

KBReport kb_report(std::span<const Trajectory> ensemble, std::span<const ObservableSpec> panel, double t0,
                   std::size_t doublings);

/// Fraction of [0, T] with |v(t)|_H > R (right-endpoint rule on the
/// recorded rows).  The trajectory must start from v(0) = 0 and T >= 1.
double exceedance_fraction(const Trajectory& traj, double radius, double horizon);

struct ExceedanceTable {
  std::vector<double> radii;
  std::vector<double> horizons;
  std::vector<std::vector<stats::MeanSe>> fraction;  ///< [horizon][radius]
  /// Ensemble means non-increasing in R for every horizon.
  bool monotone_in_radius() const;
  /// Largest |mean(T_i) - mean(T_0)| / combined s.e. over radii and horizons.
  double max_horizon_drift() const;
};

ExceedanceTable exceedance_table(std::span<const Trajectory> ensemble, std::span<const double> radii,
                                 std::span<const double> horizons);

struct ZTNormParams {
  double beta = 0.125;
  double delta = 0.2;
  double p = 8.0 / 3.0;
  /// beta in (0, 1/4], delta in (0, 1], beta + delta/2 < (1 - g)/2, p >= 1.
  void validate(double g) const;
};

struct ZTNorm {
  double sup_H = 0.0;
  double l2_Hdelta = 0.0;
  double lp_L4 = 0.0;
  HolderNorm holder;  ///< C^beta([0, T]; H^{-1}); a lower bound of the continuous norm
  double total() const { return sup_H + l2_Hdelta + lp_L4 + holder.total(); }
};

ZTNorm zt_norm(std::span<const TimedField> samples, const ZTNormParams& params, double g);
ZTNorm zt_norm(const Trajectory& traj, const ZTNormParams& params, double g);

struct StationarityResult {
  double ks = 0.0;
  double p_value = 1.0;
  double ess_first = 0.0;
  double ess_second = 0.0;
  bool inconclusive = false;  ///< fewer than 20 effective samples in a window
  bool passes(double level) const { return !inconclusive && p_value >= level; }
};

/// Default burn-in max(10 / gamma, T / 2).
double default_burn_in(double gamma, double t_end);

/// Two-sample KS between the samples in [b, (b+T)/2) and [(b+T)/2, T], b the
/// burn-in, with the p-value computed at the autocorrelation-adjusted
/// effective sizes.
StationarityResult stationarity_diagnostic(std::span<const double> times, std::span<const double> values,
                                           double burn_in);
StationarityResult stationarity_diagnostic(const Trajectory& traj, const ObservableSpec& phi, double burn_in);

struct MollificationLevel {
  double m = 0.0;
  std::vector<stats::MeanSe> averages;  ///< per panel entry
};

struct MollificationStudy {
  std::vector<std::string> observables;
  std::vector<MollificationLevel> levels;
  /// [observable][j] = |A(m_{j+1}) - A(m_j)|
  std::vector<std::vector<double>> gaps;
  bool gaps_decreasing(std::size_t observable) const;
  /// Last two levels within 2 combined standard errors.
  bool tail_agrees(std::size_t observable) const;
};

struct MollificationStudyOptions {
  std::size_t members = 8;
  std::size_t workers = 0;
  double burn_in = 0.0;
};

/// Same seeds and noise for every m; each member's post-burn-in time average
/// feeds the ensemble statistics.
MollificationStudy mollification_limit_study(const SolverConfig& base, std::span<const double> m_grid,
                                             const SpectralField& initial, std::span<const ObservableSpec> panel,
                                             const MollificationStudyOptions& options = {});

}  // namespace sdns
