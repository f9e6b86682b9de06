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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "fixtures.hpp"
#include "sdns/integrator.hpp"
#include "sdns/spectral_ops.hpp"
#include "sdns/stats.hpp"

namespace sdns {
namespace {

using testing::random_field;

SolverConfig base(int d, int n, double t_end = 1.0) {
  SolverConfig cfg{Grid(d, n)};
  cfg.t_end = t_end;
  if (d == 3) cfg.mollifier = {16.0};
  return cfg;
}

NoiseModel additive(const Grid& g, double c0, std::uint64_t seed) {
  NoiseParams p;
  p.c0 = c0;
  p.r = 0.5 * g.dim();
  p.seed = seed;
  return NoiseModel::power_law(g, p);
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg = base(2, 8);
  EXPECT_NO_THROW(cfg.validate());
  auto expect_error = [](SolverConfig c, const std::string& fragment) {
    try {
      c.validate();
      ADD_FAILURE() << "no error for " << fragment;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  SolverConfig c = cfg;
  c.nu = 0.0;
  expect_error(c, "solver.nu");
  c = cfg;
  c.gamma = -1.0;
  expect_error(c, "solver.gamma");
  c = cfg;
  c.dt = 0.03;
  expect_error(c, "integer multiple");
  c = cfg;
  c.observe_every = 0;
  expect_error(c, "observe_every");
  SolverConfig d3{Grid(3, 8)};
  expect_error(d3, "d = 3 requires a finite mollifier");
  d3.nonlinear = false;
  EXPECT_NO_THROW(d3.validate());
  EXPECT_EQ(cfg.step_count(), 100u);
}

TEST(UStep, LinearDecayPerMode) {
  SolverConfig cfg = base(2, 8);
  cfg.nonlinear = false;
  const SpectralField u = random_field(cfg.grid, 91, 0);
  const SpectralField u1 = u_step(u, u, cfg);
  for (int c = 0; c < 2; ++c)
    for (std::size_t idx = 0; idx < cfg.grid.size(); ++idx) {
      const double lambda = cfg.nu * cfg.grid.k_squared(idx) + cfg.gamma;
      EXPECT_NEAR(std::abs(u1.at(c, idx) - u.at(c, idx) / (1.0 + cfg.dt * lambda)), 0.0, 1e-15);
    }
}

TEST(UStep, SteadyForcingFixedPoint) {
  SolverConfig cfg = base(2, 8, 10.0);
  cfg.nonlinear = false;
  cfg.forcing = single_mode_field(cfg.grid, {1, 1, 0}, 0.5);
  const double lambda = cfg.nu * 2.0 + cfg.gamma;
  const auto steps = static_cast<int>(std::ceil(10.0 / (cfg.dt * lambda)));
  SpectralField u(cfg.grid);
  for (int s = 0; s < steps; ++s) u = u_step(u, u, cfg);
  const SpectralField fixed = (1.0 / lambda) * cfg.forcing;
  EXPECT_LE(sobolev_norm(0.0, u - fixed), 0.01 * sobolev_norm(0.0, fixed));
}

// One step assembled by hand from the noise and nonlinearity modules.
TEST(Stepper, MatchesComposition) {
  for (double alpha : {0.0, 2.0}) {
    SolverConfig cfg = base(2, 8, 0.02);
    cfg.noise = additive(cfg.grid, 1.0, 92);
    cfg.alpha = alpha;
    cfg.forcing = single_mode_field(cfg.grid, {1, 0, 0}, 0.3);
    const SpectralField x = random_field(cfg.grid, 93, 0);
    Stepper s(std::make_shared<const SolverConfig>(cfg), x, 4);
    s.advance();
    s.advance();

    SpectralField z(cfg.grid), u = x, v = x;
    for (std::uint64_t n = 0; n < 2; ++n) {
      const auto xi = sample_increment(cfg.noise, cfg.dt, {cfg.noise.seed(), 4}, n);
      z = ou_exact_step(cfg.noise, v, z, xi, cfg.nu, cfg.gamma + alpha);
      const SpectralField feed = alpha * z;
      SpectralField u1(cfg.grid);
      const SpectralField b = bilinear_Bm(cfg.mollifier, v, v, cfg.dealias);
      for (int c = 0; c < 2; ++c)
        for (std::size_t idx = 0; idx < cfg.grid.size(); ++idx) {
          if (cfg.grid.is_nyquist(idx)) continue;
          const double lambda = cfg.nu * cfg.grid.k_squared(idx) + cfg.gamma;
          u1.at(c, idx) = (u.at(c, idx) + cfg.dt * (cfg.forcing.at(c, idx) - b.at(c, idx) + feed.at(c, idx))) /
                          (1.0 + cfg.dt * lambda);
        }
      u = u1;
      v = z + u;
    }
    for (std::size_t i = 0; i < v.coeffs().size(); ++i) {
      EXPECT_NEAR(std::abs(s.v().coeffs()[i] - v.coeffs()[i]), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(s.z().coeffs()[i] - z.coeffs()[i]), 0.0, 1e-14);
    }
    EXPECT_EQ(s.step(), 2u);
    EXPECT_DOUBLE_EQ(s.time(), 0.02);
  }
}

TEST(Stepper, DeterministicDecayBound) {
  for (int d : {2, 3}) {
    SolverConfig cfg = base(d, d == 2 ? 16 : 8, 5.0);
    cfg.gamma = 1.0;
    const SpectralField x = random_field(cfg.grid, 94, 0, 1.0, 3.0);
    const Trajectory traj = simulate(cfg, x);
    for (const auto& row : traj.rows)
      EXPECT_LE(row.norm_H, 1.02 * std::exp(-cfg.gamma * row.time) * traj.rows[0].norm_H) << "t = " << row.time;
  }
}

TEST(Stepper, SameSeedIsBitwiseReproducible) {
  SolverConfig cfg = base(2, 16, 0.5);
  cfg.noise = additive(cfg.grid, 1.0, 95);
  const SpectralField x = random_field(cfg.grid, 96, 0);
  const Trajectory a = simulate(cfg, x, {.trajectory = 3});
  const Trajectory b = simulate(cfg, x, {.trajectory = 3});
  const Trajectory c = simulate(cfg, x, {.trajectory = 4});
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].norm_H, b.rows[i].norm_H);
    EXPECT_EQ(a.rows[i].norm_L4, b.rows[i].norm_L4);
  }
  EXPECT_NE(a.rows.back().norm_H, c.rows.back().norm_H);
}

TEST(Stepper, EnsembleMatchesSerialRuns) {
  SolverConfig cfg = base(2, 8, 0.2);
  cfg.noise = additive(cfg.grid, 1.0, 97);
  const SpectralField x = random_field(cfg.grid, 98, 0);
  const auto ens = simulate_ensemble(cfg, x, 3, 2);
  ASSERT_EQ(ens.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const Trajectory one = simulate(cfg, x, {.trajectory = i});
    EXPECT_EQ(ens[i].rows.back().norm_H, one.rows.back().norm_H);
  }
}

TEST(Stepper, LinearAdditiveEnergyMatchesOuSum) {
  // Small noise keeps the nonlinear transfer negligible; the long-run mean of
  // |v|_H^2 is then the stationary OU energy sum_k c_k^2 / (2 lambda_k) per element.
  SolverConfig cfg = base(2, 16, 40.0);
  cfg.noise = additive(cfg.grid, 0.3, 99);
  cfg.observe_every = 5;
  std::vector<double> means;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const Trajectory traj = simulate(cfg, SpectralField(cfg.grid), {.trajectory = s});
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : traj.rows)
      if (r.time >= 5.0) {
        sum += r.norm_H * r.norm_H;
        ++count;
      }
    means.push_back(sum / double(count));
  }
  double oracle = 0.0;
  for (std::size_t idx : cfg.noise.active_modes()) {
    const double c = cfg.noise.amplitude(idx);
    oracle += c * c / (2.0 * (cfg.nu * cfg.grid.k_squared(idx) + cfg.gamma));
  }
  const auto ms = stats::mean_se(means);
  EXPECT_LE(ms.mean, oracle * 1.05 + 3.0 * ms.se);
  EXPECT_GE(ms.mean, oracle * 0.95 - 3.0 * ms.se);
}

TEST(Stepper, BlowUpCarriesStep) {
  SolverConfig cfg = base(2, 16, 100.0);
  cfg.dt = 1.0;
  cfg.nu = 1e-6;
  cfg.gamma = 1e-6;
  const SpectralField x = random_field(cfg.grid, 100, 0, 0.0, 1e4);
  try {
    simulate(cfg, x);
    FAIL() << "expected a blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_GT(e.step(), 0u);
    EXPECT_LT(e.step(), 100u);
  }
}

TEST(EnergyResidual, LinearRegimeIsFirstOrder) {
  auto worst = [](double dt, bool nonlinear) {
    SolverConfig cfg = base(2, 16, 0.2);
    cfg.dt = dt;
    cfg.nonlinear = nonlinear;
    cfg.forcing = single_mode_field(cfg.grid, {1, 1, 0}, 1.0);
    const Trajectory traj = simulate(cfg, random_field(cfg.grid, 101, 0, 4.0, 2.0));
    double w = 0.0;
    for (std::size_t i = 1; i < traj.rows.size(); ++i) w = std::max(w, std::abs(traj.rows[i].energy_residual));
    return w;
  };
  for (bool nl : {false, true}) {
    const double r1 = worst(0.01, nl), r2 = worst(0.005, nl), r3 = worst(0.0025, nl);
    EXPECT_GE(std::log2(r1 / r2), 0.9);
    EXPECT_GE(std::log2(r2 / r3), 0.9);
  }
}

TEST(EnergyResidual, UnforcedSilentRunConverges) {
  double prev = 0.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    SolverConfig cfg = base(2, 16, 0.1);
    cfg.dt = dt;
    Stepper s(std::make_shared<const SolverConfig>(cfg), random_field(cfg.grid, 102, 0, 4.0, 1.0));
    s.advance();
    const double r = std::abs(s.last_budget().residual());
    if (prev > 0.0) EXPECT_NEAR(prev / r, 2.0, 0.2);
    prev = r;
  }
}

TEST(EnergyResidual, SmallAgainstRetainedTerms) {
  SolverConfig cfg = base(2, 16);
  cfg.noise = additive(cfg.grid, 1.0, 103);
  const SpectralField x = random_field(cfg.grid, 104, 0, 4.0, 1.0);
  Stepper s(std::make_shared<const SolverConfig>(cfg), x);
  s.advance();
  const EnergyBudget b = s.last_budget();
  const double smallest = std::min({std::abs(b.rate), b.dissipation, b.damping});
  EXPECT_LE(std::abs(b.residual()), 0.05 * smallest);
  const StepRecord rec{x, s.u(), s.v(), std::nullopt};
  EXPECT_NEAR(energy_residual(rec, cfg), b.residual(), 1e-12);
}

TEST(Contraction, IdenticalDataStayIdentical) {
  SolverConfig cfg = base(3, 8, 0.1);
  cfg.noise = additive(cfg.grid, 1.0, 105);
  const SpectralField x = random_field(cfg.grid, 106, 0);
  const auto rep = twin_run_contraction(cfg, x, x, {.m_hat = 1.0});
  EXPECT_TRUE(rep.identical);
  for (double d : rep.distance) EXPECT_EQ(d, 0.0);
  EXPECT_EQ(rep.max_step_increase, 0.0);
}

TEST(Contraction, WeightedDistanceNonIncreasing) {
  SolverConfig cfg = base(3, 8, 0.5);
  cfg.noise = additive(cfg.grid, 1.0, 107);
  const SpectralField x = random_field(cfg.grid, 108, 0);
  const SpectralField dx = random_field(cfg.grid, 108, 1, 2.0, 1e-3);
  const auto rep = twin_run_contraction(cfg, x, x + dx, {.calibration_samples = 16});
  EXPECT_FALSE(rep.identical);
  EXPECT_TRUE(rep.non_increasing) << rep.max_step_increase;
  EXPECT_LE(rep.weighted.back(), rep.weighted.front());
  EXPECT_GE(rep.m_hat, 0.0);
  // Quadratic in the perturbation.
  const auto twice = twin_run_contraction(cfg, x, x + 2.0 * dx, {.m_hat = rep.m_hat});
  EXPECT_NEAR(twice.weighted.front() / rep.weighted.front(), 4.0, 1e-9);
}

TEST(Contraction, RejectsMultiplicativeNoise) {
  SolverConfig cfg = base(3, 8, 0.1);
  NoiseParams p;
  p.psi = Saturation::tanh;
  cfg.noise = NoiseModel::power_law(cfg.grid, p);
  const SpectralField x = random_field(cfg.grid, 109, 0);
  EXPECT_THROW(twin_run_contraction(cfg, x, x), Error);
}

TEST(Gronwall, NoiseOffReducesToForcingBudget) {
  SolverConfig cfg = base(2, 16, 2.0);
  cfg.forcing = single_mode_field(cfg.grid, {1, 0, 0}, 1.0);
  const SpectralField x = random_field(cfg.grid, 110, 0);
  const Trajectory traj = simulate(cfg, x);
  const GronwallReport rep = gronwall_envelope_check(traj, 10.0, 10.0);
  EXPECT_EQ(rep.phi, 0.0);
  const double f = sobolev_norm(-1.0, cfg.forcing);
  EXPECT_NEAR(rep.psi, std::pow(sobolev_norm(0.0, x), 2) + 10.0 * f * f * 2.0, 1e-12);
  EXPECT_TRUE(rep.holds());
}

TEST(Gronwall, HoldsOnNoisyRunsAndFlagsSpike) {
  SolverConfig cfg = base(2, 16, 2.0);
  cfg.noise = additive(cfg.grid, 1.0, 111);
  const SpectralField x = random_field(cfg.grid, 112, 0);
  for (std::uint64_t s = 0; s < 5; ++s) {
    Trajectory traj = simulate(cfg, x, {.trajectory = s});
    EXPECT_TRUE(gronwall_envelope_check(traj, 10.0, 10.0).holds());
    if (s == 0) {
      traj.rows[traj.rows.size() / 2].u_H = 1e12;
      EXPECT_FALSE(gronwall_envelope_check(traj, 10.0, 10.0).holds_sup);
    }
  }
}

TEST(Gronwall, RequiresZObservables) {
  SolverConfig cfg = base(2, 8, 0.1);
  const Trajectory traj = simulate(cfg, SpectralField(cfg.grid), {.record_z = false});
  EXPECT_THROW(gronwall_envelope_check(traj, 10.0, 10.0), Error);
}

TEST(CoupledDriver, ReplaysTrajectory) {
  SolverConfig cfg = base(2, 8, 0.1);
  cfg.noise = additive(cfg.grid, 1.0, 113);
  const SpectralField x = random_field(cfg.grid, 114, 0);
  const DriverPath path = coupled_driver(cfg, x)(2);
  Stepper s(std::make_shared<const SolverConfig>(cfg), x, 2);
  EXPECT_EQ(path(0).coeffs(), s.v().coeffs());
  for (int i = 0; i < 3; ++i) s.advance();
  EXPECT_EQ(path(3).coeffs(), s.v().coeffs());
  EXPECT_THROW(path(1), Error);
}

TEST(Simulate, RecordingCadenceAndSnapshots) {
  SolverConfig cfg = base(2, 8, 0.25);
  cfg.observe_every = 10;
  cfg.snapshot_every = 5;
  const Trajectory traj = simulate(cfg, random_field(cfg.grid, 115, 0), {.snapshot_z = true});
  std::vector<double> times;
  for (const auto& r : traj.rows) times.push_back(r.time);
  ASSERT_EQ(times.size(), 4u);
  EXPECT_NEAR(times[1], 0.1, 1e-12);
  EXPECT_NEAR(times[3], 0.25, 1e-12);
  EXPECT_TRUE(std::isnan(traj.rows[0].energy_residual));
  EXPECT_EQ(traj.snapshots.size(), 6u);
  EXPECT_EQ(traj.z_snapshots.size(), 6u);
}

}  // namespace
}  // namespace sdns
