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

#include "sdns/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "sdns/parallel.hpp"
#include "sdns/random_fields.hpp"

namespace sdns {

ObservableSpec ObservableSpec::norm_h_squared() { return {}; }

ObservableSpec ObservableSpec::norm_l4() {
  ObservableSpec s;
  s.kind = Kind::norm_L4;
  return s;
}

ObservableSpec ObservableSpec::energy_band(double lo, double hi) {
  if (!(hi > lo && lo >= 0.0)) throw Error("energy_band: need 0 <= lo < hi");
  ObservableSpec s;
  s.kind = Kind::energy_band;
  s.k_lo = lo;
  s.k_hi = hi;
  return s;
}

ObservableSpec ObservableSpec::bounded_test(SpectralField probe, double radius, std::string label) {
  if (!(radius > 0.0)) throw Error("bounded_test: radius must be positive");
  ObservableSpec s;
  s.kind = Kind::bounded_test;
  s.probe = std::move(probe);
  s.radius = radius;
  s.label = std::move(label);
  return s;
}

std::string ObservableSpec::name() const {
  switch (kind) {
    case Kind::norm_H_squared:
      return "norm_H_squared";
    case Kind::norm_L4:
      return "norm_L4";
    case Kind::energy_band: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "energy_band_%g_%g", k_lo, k_hi);
      return buf;
    }
    case Kind::bounded_test:
      return "test_" + label;
  }
  return "unknown";
}

double ObservableSpec::evaluate(const SpectralField& v) const {
  switch (kind) {
    case Kind::norm_H_squared: {
      const double h = sobolev_norm(0.0, v);
      return h * h;
    }
    case Kind::norm_L4:
      return lp_norm(4.0, v);
    case Kind::energy_band: {
      const Grid& grid = v.grid();
      double sum = 0.0;
      for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const double k = std::sqrt(grid.k_squared(idx));
        if (k < k_lo || k >= k_hi) continue;
        for (int c = 0; c < grid.dim(); ++c) sum += std::norm(v.at(c, idx));
      }
      return grid.volume() * sum;
    }
    case Kind::bounded_test:
      return radius * radius * std::tanh(std::pow(inner_product(v, *probe) / radius, 2));
  }
  return 0.0;
}

Functional ObservableSpec::functional() const {
  ObservableSpec copy = *this;
  return {name(), [copy](const SpectralField& v) { return copy.evaluate(v); }};
}

std::vector<ObservableSpec> default_panel(const Grid& grid, double radius) {
  std::vector<ObservableSpec> panel{ObservableSpec::norm_h_squared(), ObservableSpec::norm_l4(),
                                    ObservableSpec::energy_band(1.0, 2.0)};
  const std::array<std::array<int, 3>, 2> modes{{{0, 1, 0}, {1, 0, 0}}};
  const char* labels[] = {"cos_y", "cos_x"};
  for (std::size_t i = 0; i < modes.size(); ++i) {
    SpectralField h = single_mode_field(grid, modes[i], 1.0);
    h *= 1.0 / sobolev_norm(0.0, h);
    panel.push_back(ObservableSpec::bounded_test(std::move(h), radius, labels[i]));
  }
  return panel;
}

double kb_average(std::span<const double> times, std::span<const double> values, double horizon) {
  if (times.size() != values.size() || times.size() < 2) throw Error("kb_average: need at least two samples");
  if (!(horizon > 0.0)) throw Error("kb_average: horizon must be positive");
  const double t0 = times.front();
  const double end = t0 + horizon;
  const double tol = 1e-9 * std::max(1.0, std::abs(end));
  if (end > times.back() + tol) throw Error("kb_average: horizon exceeds the trajectory");
  std::vector<double> t, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > end + tol) {
      const double w = (end - times[i - 1]) / (times[i] - times[i - 1]);
      t.push_back(end);
      y.push_back(values[i - 1] + w * (values[i] - values[i - 1]));
      break;
    }
    t.push_back(times[i]);
    y.push_back(values[i]);
  }
  return stats::trapezoid(t, y) / horizon;
}

std::vector<double> observable_series(const Trajectory& traj, const ObservableSpec& phi) {
  const std::string name = phi.name();
  for (std::size_t i = 0; i < traj.functional_names.size(); ++i)
    if (traj.functional_names[i] == name) return traj.functional_values[i];
  if (phi.kind == ObservableSpec::Kind::norm_H_squared) {
    auto out = traj.column(&ObservableRow::norm_H);
    for (double& x : out) x *= x;
    return out;
  }
  if (phi.kind == ObservableSpec::Kind::norm_L4) return traj.column(&ObservableRow::norm_L4);
  throw Error("trajectory did not record observable '" + name + "'");
}

double kb_average(const Trajectory& traj, const ObservableSpec& phi, double horizon) {
  return kb_average(traj.times(), observable_series(traj, phi), horizon);
}

bool KBReport::gaps_decreasing(std::size_t observable) const {
  const auto& g = gaps.at(observable);
  for (std::size_t j = 1; j < g.size(); ++j)
    if (!(g[j] < g[j - 1])) return false;
  return true;
}

KBReport kb_report(std::span<const Trajectory> ensemble, std::span<const ObservableSpec> panel, double t0,
                   std::size_t doublings) {
  if (ensemble.empty()) throw Error("kb_report: empty ensemble");
  KBReport rep;
  rep.members = ensemble.size();
  for (std::size_t j = 0; j <= doublings; ++j) rep.horizons.push_back(t0 * std::pow(2.0, static_cast<double>(j)));
  for (const auto& phi : panel) {
    rep.observables.push_back(phi.name());
    std::vector<std::vector<double>> per_h(rep.horizons.size());
    for (const auto& traj : ensemble) {
      const auto times = traj.times();
      const auto series = observable_series(traj, phi);
      for (std::size_t j = 0; j < rep.horizons.size(); ++j)
        per_h[j].push_back(kb_average(times, series, rep.horizons[j]));
    }
    std::vector<stats::MeanSe> avgs;
    for (const auto& v : per_h) avgs.push_back(stats::mean_se(v));
    std::vector<double> gaps;
    for (std::size_t j = 1; j < avgs.size(); ++j) gaps.push_back(std::abs(avgs[j].mean - avgs[j - 1].mean));
    rep.averages.push_back(std::move(avgs));
    rep.gaps.push_back(std::move(gaps));
  }
  return rep;
}

double exceedance_fraction(const Trajectory& traj, double radius, double horizon) {
  if (traj.rows.size() < 2) throw Error("exceedance_fraction: need at least two rows");
  if (traj.rows.front().norm_H != 0.0) throw Error("exceedance_fraction: trajectory must start from v(0) = 0");
  if (horizon < 1.0) throw Error("exceedance_fraction: horizon must be at least 1");
  const double t0 = traj.rows.front().time;
  const double end = t0 + horizon;
  const double tol = 1e-9 * std::max(1.0, end);
  if (end > traj.rows.back().time + tol) throw Error("exceedance_fraction: horizon exceeds the trajectory");
  double above = 0.0;
  for (std::size_t i = 1; i < traj.rows.size() && traj.rows[i - 1].time < end - tol; ++i) {
    const double hi = std::min(traj.rows[i].time, end);
    if (traj.rows[i].norm_H > radius) above += hi - traj.rows[i - 1].time;
  }
  return above / horizon;
}

bool ExceedanceTable::monotone_in_radius() const {
  for (const auto& row : fraction)
    for (std::size_t r = 1; r < row.size(); ++r)
      if (row[r].mean > row[r - 1].mean) return false;
  return true;
}

double ExceedanceTable::max_horizon_drift() const {
  double worst = 0.0;
  for (std::size_t h = 1; h < fraction.size(); ++h)
    for (std::size_t r = 0; r < radii.size(); ++r) {
      const auto& a = fraction[0][r];
      const auto& b = fraction[h][r];
      const double diff = std::abs(b.mean - a.mean);
      const double se = std::sqrt(a.se * a.se + b.se * b.se);
      if (diff == 0.0) continue;
      worst = std::max(worst, se > 0.0 ? diff / se : std::numeric_limits<double>::infinity());
    }
  return worst;
}

ExceedanceTable exceedance_table(std::span<const Trajectory> ensemble, std::span<const double> radii,
                                 std::span<const double> horizons) {
  if (ensemble.empty()) throw Error("exceedance_table: empty ensemble");
  ExceedanceTable tab;
  tab.radii.assign(radii.begin(), radii.end());
  tab.horizons.assign(horizons.begin(), horizons.end());
  for (double T : horizons) {
    std::vector<stats::MeanSe> row;
    for (double R : radii) {
      std::vector<double> fr;
      for (const auto& traj : ensemble) fr.push_back(exceedance_fraction(traj, R, T));
      row.push_back(stats::mean_se(fr));
    }
    tab.fraction.push_back(std::move(row));
  }
  return tab;
}

void ZTNormParams::validate(double g) const {
  if (!(beta > 0.0 && beta <= 0.25)) throw Error("tightness.beta must lie in (0, 1/4]");
  if (!(delta > 0.0 && delta <= 1.0)) throw Error("tightness.delta must lie in (0, 1]");
  if (!(p >= 1.0)) throw Error("tightness.p must be at least 1");
  if (!(beta + 0.5 * delta < 0.5 * (1.0 - g)))
    throw Error("tightness: beta + delta/2 must be below (1 - g)/2 for noise.g = " + std::to_string(g));
}

ZTNorm zt_norm(std::span<const TimedField> samples, const ZTNormParams& params, double g) {
  params.validate(g);
  if (samples.size() < 2) throw Error("zt_norm: need at least two snapshots");
  ZTNorm out;
  std::vector<double> t, hd2, l4p;
  for (const auto& s : samples) {
    out.sup_H = std::max(out.sup_H, sobolev_norm(0.0, s.field));
    const double hd = sobolev_norm(params.delta, s.field);
    t.push_back(s.time);
    hd2.push_back(hd * hd);
    l4p.push_back(std::pow(lp_norm(4.0, s.field), params.p));
  }
  out.l2_Hdelta = std::sqrt(stats::trapezoid(t, hd2));
  out.lp_L4 = std::pow(stats::trapezoid(t, l4p), 1.0 / params.p);
  out.holder = holder_seminorm(params.beta, -1.0, samples);
  return out;
}

ZTNorm zt_norm(const Trajectory& traj, const ZTNormParams& params, double g) {
  if (traj.snapshots.size() < 2) throw Error("zt_norm: trajectory has fewer than two snapshots");
  return zt_norm(traj.snapshots, params, g);
}

double default_burn_in(double gamma, double t_end) { return std::max(10.0 / gamma, 0.5 * t_end); }

StationarityResult stationarity_diagnostic(std::span<const double> times, std::span<const double> values,
                                           double burn_in) {
  if (times.size() != values.size() || times.empty()) throw Error("stationarity_diagnostic: bad series");
  const double end = times.back();
  if (!(burn_in < end)) throw Error("stationarity_diagnostic: burn-in covers the whole trajectory");
  const double split = 0.5 * (burn_in + end);
  std::vector<double> first, second;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < burn_in) continue;
    (times[i] < split ? first : second).push_back(values[i]);
  }
  StationarityResult res;
  res.ess_first = first.size() > 1 ? stats::effective_sample_size(first) : 0.0;
  res.ess_second = second.size() > 1 ? stats::effective_sample_size(second) : 0.0;
  if (first.empty() || second.empty()) {
    res.inconclusive = true;
    return res;
  }
  res.ks = stats::ks_statistic(first, second);
  res.inconclusive = res.ess_first < 20.0 || res.ess_second < 20.0;
  if (res.ess_first > 0.0 && res.ess_second > 0.0) res.p_value = stats::ks_pvalue(res.ks, res.ess_first, res.ess_second);
  return res;
}

StationarityResult stationarity_diagnostic(const Trajectory& traj, const ObservableSpec& phi, double burn_in) {
  return stationarity_diagnostic(traj.times(), observable_series(traj, phi), burn_in);
}

bool MollificationStudy::gaps_decreasing(std::size_t observable) const {
  const auto& g = gaps.at(observable);
  for (std::size_t j = 1; j < g.size(); ++j)
    if (!(g[j] < g[j - 1])) return false;
  return true;
}

bool MollificationStudy::tail_agrees(std::size_t observable) const {
  if (levels.size() < 2) return true;
  const auto& a = levels[levels.size() - 2].averages.at(observable);
  const auto& b = levels.back().averages.at(observable);
  return std::abs(a.mean - b.mean) <= 2.0 * std::sqrt(a.se * a.se + b.se * b.se);
}

namespace {

double tail_average(const std::vector<double>& times, const std::vector<double>& values, double burn_in) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= burn_in - 1e-12) {
      t.push_back(times[i]);
      y.push_back(values[i]);
    }
  if (t.size() < 2) throw Error("mollification_limit_study: burn-in leaves fewer than two samples");
  return kb_average(t, y, t.back() - t.front());
}

}  // namespace

MollificationStudy mollification_limit_study(const SolverConfig& base, std::span<const double> m_grid,
                                             const SpectralField& initial, std::span<const ObservableSpec> panel,
                                             const MollificationStudyOptions& options) {
  if (base.grid.dim() != 3) throw Error("mollification_limit_study: requires d = 3");
  if (m_grid.empty()) throw Error("mollification_limit_study: empty m grid");
  if (options.members == 0) throw Error("mollification_limit_study: need at least one member");
  MollificationStudy study;
  for (const auto& phi : panel) study.observables.push_back(phi.name());
  SimulateOptions sim;
  for (const auto& phi : panel) sim.functionals.push_back(phi.functional());
  sim.record_z = false;
  for (double m : m_grid) {
    SolverConfig cfg = base;
    cfg.mollifier.m = m;
    const auto ensemble = simulate_ensemble(cfg, initial, options.members, options.workers, sim);
    MollificationLevel level;
    level.m = m;
    for (const auto& phi : panel) {
      std::vector<double> per_member;
      for (const auto& traj : ensemble)
        per_member.push_back(tail_average(traj.times(), observable_series(traj, phi), options.burn_in));
      level.averages.push_back(stats::mean_se(per_member));
    }
    study.levels.push_back(std::move(level));
  }
  for (std::size_t o = 0; o < panel.size(); ++o) {
    std::vector<double> g;
    for (std::size_t j = 1; j < study.levels.size(); ++j)
      g.push_back(std::abs(study.levels[j].averages[o].mean - study.levels[j - 1].averages[o].mean));
    study.gaps.push_back(std::move(g));
  }
  return study;
}

}  // namespace sdns
