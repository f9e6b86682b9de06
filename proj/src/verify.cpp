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

#include "sdns/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "sdns/csv.hpp"
#include "sdns/integrator.hpp"
#include "sdns/noise_model.hpp"
#include "sdns/parallel.hpp"
#include "sdns/random_fields.hpp"
#include "sdns/rng.hpp"
#include "sdns/snapshot_io.hpp"
#include "sdns/spectral_ops.hpp"
#include "sdns/stats.hpp"

namespace sdns {

Profile parse_profile(const std::string& name) {
  if (name == "quick") return Profile::quick;
  if (name == "full") return Profile::full;
  throw Error("unknown profile '" + name + "' (expected quick or full)");
}

std::string to_string(Profile profile) { return profile == Profile::quick ? "quick" : "full"; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Ctx {
  Profile profile;
  int n;
  std::size_t samples;
  std::uint64_t seed;
  BilinearFn bilinear;

  bool full() const { return profile == Profile::full; }
  std::size_t pick(std::size_t quick, std::size_t full_count) const { return full() ? full_count : quick; }
  std::string digest(const std::string& id, const std::string& extra = "") const {
    std::ostringstream os;
    os << id << ';' << to_string(profile) << ";n=" << n << ";samples=" << samples << ";seed=" << seed << ';' << extra;
    return hex_digest(os.str());
  }
};

LedgerRow make_row(const Ctx& ctx, const std::string& id, const std::string& anchor, double measured,
                   double threshold, bool pass, std::size_t samples, const std::string& note = "") {
  LedgerRow r;
  r.check_id = id;
  r.anchor = anchor;
  r.measured = measured;
  r.threshold = threshold;
  r.pass = pass && std::isfinite(measured);
  r.samples = samples;
  r.digest = ctx.digest(id, note);
  r.note = note;
  return r;
}

SpectralField random_field(const Grid& grid, double slope, double norm, std::uint64_t seed, std::uint64_t index,
                           double k_max = 1e9) {
  RandomFieldSpec spec;
  spec.slope = slope;
  spec.l2_norm = norm;
  spec.k_max = k_max;
  return random_solenoidal_field(grid, spec, seed, index);
}

/// Single low modes first, then random pairs.
std::vector<FieldPair> field_pairs(const Grid& grid, std::size_t count, std::uint64_t seed, double slope = 3.0) {
  std::vector<FieldPair> out;
  out.emplace_back(single_mode_field(grid, {1, 0, 0}, 1.0), single_mode_field(grid, {0, 1, 0}, 1.0));
  out.emplace_back(single_mode_field(grid, {1, 0, 0}, 1.0), single_mode_field(grid, {1, 0, 0}, 1.0));
  for (std::size_t i = 0; out.size() < std::max<std::size_t>(count, 2); ++i)
    out.emplace_back(random_field(grid, slope, 1.0, seed, 2 * i), random_field(grid, slope, 1.0, seed, 2 * i + 1));
  return out;
}

SpectralField apply_b(const Ctx& ctx, const SpectralField& u, const SpectralField& v, const DealiasRule& rule = {}) {
  return ctx.bilinear ? ctx.bilinear(u, v, rule) : bilinear_B(u, v, rule);
}

double rel_change(double coarse, double fine) {
  if (coarse == 0.0) return fine == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(fine / coarse - 1.0);
}

std::string fmt(double x) { return format_number(x); }

// ---------------------------------------------------------------- nonlinearity

std::vector<LedgerRow> check_skew(const Ctx& ctx) {
  double worst = 0.0, worst_t = 0.0;
  std::size_t count = 0;
  const std::vector<MollifierParam> ms{MollifierParam::none(), {1.0}, {10.0}};
  for (int d : {2, 3}) {
    const Grid grid(d, ctx.n);
    const auto pairs = field_pairs(grid, ctx.samples, ctx.seed + static_cast<std::uint64_t>(d));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [u, v] = pairs[i];
      const SpectralField w = random_field(grid, 3.0, 1.0, ctx.seed + 100 + static_cast<std::uint64_t>(d), i);
      for (const auto& m : ms) {
        const SpectralField um = mollify(m, u);
        const double scale = sobolev_norm(0.0, u) * std::pow(sobolev_norm(1.0, v), 2);
        if (scale > 0.0) worst = std::max(worst, std::abs(inner_product(apply_b(ctx, um, v), v)) / scale);
        const double scale_t = sobolev_norm(0.0, u) * sobolev_norm(1.0, v) * sobolev_norm(1.0, w);
        if (scale_t > 0.0) {
          const double t = inner_product(apply_b(ctx, um, v), w) + inner_product(apply_b(ctx, um, w), v);
          worst_t = std::max(worst_t, std::abs(t) / scale_t);
        }
        ++count;
      }
    }
  }
  return {make_row(ctx, "skew_symmetry", "<B(u,v),v> = 0 and <B_m(u,v),v> = 0", worst, 1e-10, worst <= 1e-10, count,
                   "d in {2,3}; m in {inf,1,10}; scale |u|_H |v|_{H^1}^2"),
          make_row(ctx, "transposition", "<B(u,v),z> = -<B(u,z),v>", worst_t, 1e-10, worst_t <= 1e-10, count,
                   "scale |u|_H |v|_{H^1} |z|_{H^1}")};
}

std::vector<LedgerRow> check_h1_identity(const Ctx& ctx) {
  double worst = 0.0;
  std::size_t count = 0;
  for (int d : {2, 3}) {
    const Grid grid(d, ctx.n, 3.0);
    for (std::size_t i = 0; i < ctx.samples; ++i) {
      const SpectralField v = i == 0 ? single_mode_field(grid, {1, 1, 0}, 2.0)
                                     : random_field(grid, 1.5, 1.0, ctx.seed + 7, i);
      const double h1 = sobolev_norm(1.0, v), l2 = sobolev_norm(0.0, v), gr = grad_l2_norm(v);
      worst = std::max(worst, std::abs(h1 * h1 - l2 * l2 - gr * gr) / (h1 * h1));
      ++count;
    }
  }
  return {make_row(ctx, "h1_norm_identity", "|v|_{H^1}^2 = |v|_{L^2}^2 + |grad v|_{L^2}^2", worst, 1e-10,
                   worst <= 1e-10, count, "relative error; L = 3")};
}

std::vector<LedgerRow> check_b_l4(const Ctx& ctx) {
  double worst = 0.0;
  std::size_t count = 0;
  for (int d : {2, 3}) {
    const Grid grid(d, ctx.n);
    const auto pairs = field_pairs(grid, ctx.samples, ctx.seed + 11 + static_cast<std::uint64_t>(d));
    const auto rep = check_B_bounds(pairs, MollifierParam::none(), 0.5);
    worst = std::max(worst, rep.l4.max_ratio);
    count += rep.l4.evaluated;
  }
  return {make_row(ctx, "b_l4_bound", "|B(u,v)|_{H^-1} <= |u|_{L^4} |v|_{L^4}", worst, 1.05, worst <= 1.05, count,
                   "d in {2,3}")};
}

std::vector<LedgerRow> check_bm_l4(const Ctx& ctx) {
  double worst = 0.0;
  std::size_t count = 0;
  const Grid grid(3, ctx.n);
  const auto pairs = field_pairs(grid, ctx.samples, ctx.seed + 13);
  for (double m : {1.0, 10.0, std::numeric_limits<double>::infinity()}) {
    const auto rep = check_B_bounds(pairs, {m}, 0.5);
    worst = std::max(worst, rep.l4.max_ratio);
    count += rep.l4.evaluated;
  }
  return {make_row(ctx, "bm_l4_bound", "|B_m(u,v)|_{H^-1} <= |u|_{L^4} |v|_{L^4}", worst, 1.05, worst <= 1.05, count,
                   "d = 3; m in {1,10,inf}")};
}

std::vector<LedgerRow> check_bm_refinement(const Ctx& ctx) {
  // Same band-limited inputs on n = 16 and on n = 32.
  const Grid coarse(3, 16), fine(3, 32);
  const auto pairs = field_pairs(coarse, ctx.samples, ctx.seed + 17);
  std::vector<FieldPair> fine_pairs;
  for (const auto& [u, v] : pairs) fine_pairs.emplace_back(resample(u, fine), resample(v, fine));
  double rho = 0.0, b1 = 0.0, b2 = 0.0;
  double rho_max = 0.0, b1_max = 0.0, b2_max = 0.0;
  std::size_t count = 0;
  for (double m : {1.0, 10.0}) {
    const auto c = check_B_bounds(pairs, {m}, 0.5);
    const auto f = check_B_bounds(fine_pairs, {m}, 0.5);
    rho = std::max(rho, rel_change(c.rho_l2.max_ratio, f.rho_l2.max_ratio));
    b1 = std::max(b1, rel_change(c.rough_v.max_ratio, f.rough_v.max_ratio));
    b2 = std::max(b2, rel_change(c.rough_u.max_ratio, f.rough_u.max_ratio));
    rho_max = std::max(rho_max, f.rho_l2.max_ratio);
    b1_max = std::max(b1_max, f.rough_v.max_ratio);
    b2_max = std::max(b2_max, f.rough_u.max_ratio);
    count += c.rho_l2.evaluated;
  }
  const std::string base = "d = 3; g = 0.5; m in {1,10}; relative change of the max ratio under n 16 -> 32; ";
  return {make_row(ctx, "bm_rho_l2_bound", "|B_m(u,v)|_{H^-1} <= |rho_m|_{L^2} |u|_H |v|_H", rho, 0.2, rho <= 0.2,
                   count, base + "fine max ratio " + fmt(rho_max)),
          make_row(ctx, "bm1_bound", "|B_m(u,v)|_{H^{-1-g}} <= C |rho_m|_{L^{6/(4+g)}} |u|_H |v|_{H^{(1-g)/2}}", b1,
                   0.2, b1 <= 0.2, count, base + "fine max ratio " + fmt(b1_max)),
          make_row(ctx, "bm2_bound", "|B_m(u,v)|_{H^{-1-g}} <= C |rho_m|_{L^{6/(4+g)}} |u|_{H^{(1-g)/2}} |v|_H", b2,
                   0.2, b2 <= 0.2, count, base + "fine max ratio " + fmt(b2_max))};
}

std::vector<LedgerRow> check_b_h_minus_a(const Ctx& ctx) {
  double worst = 0.0;
  std::size_t count = 0;
  std::string note;
  for (int d : {2, 3}) {
    const double a = d == 3 ? 3.0 : 2.5;
    const Grid coarse(d, 16), fine(d, 32);
    const auto pairs = field_pairs(coarse, ctx.samples, ctx.seed + 19 + static_cast<std::uint64_t>(d));
    double rc = 0.0, rf = 0.0;
    for (const auto& [u, v] : pairs) {
      const double den = sobolev_norm(0.0, u) * sobolev_norm(0.0, v);
      rc = std::max(rc, sobolev_norm(-a, bilinear_B(u, v)) / den);
      rf = std::max(rf, sobolev_norm(-a, bilinear_B(resample(u, fine), resample(v, fine))) / den);
      ++count;
    }
    worst = std::max(worst, rel_change(rc, rf));
    note += "d=" + std::to_string(d) + " a=" + fmt(a) + " max ratio " + fmt(rf) + "; ";
  }
  return {make_row(ctx, "b_h_minus_a_bound", "|B(u,v)|_{H^-a} <= C |u|_{L^2} |v|_{L^2}, a > d/2 + 1", worst, 0.2,
                   worst <= 0.2, count, note + "relative change under n 16 -> 32")};
}

std::vector<LedgerRow> check_mollifier_limit(const Ctx& ctx) {
  const Grid grid(3, ctx.n);
  const std::size_t pairs = ctx.pick(10, 20);
  const std::vector<double> ms{1.0, 4.0, 16.0, 64.0};
  double worst_final = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < pairs; ++i) {
    const SpectralField u = random_field(grid, 4.0, 1.0, ctx.seed + 23, 2 * i, 3.0);
    const SpectralField v = random_field(grid, 4.0, 1.0, ctx.seed + 23, 2 * i + 1, 3.0);
    const SpectralField b = bilinear_B(u, v);
    std::vector<double> gap, l2;
    for (double m : ms) {
      gap.push_back(sobolev_norm(-3.0, bilinear_Bm({m}, u, v) - b));
      l2.push_back(sobolev_norm(0.0, mollify({m}, u) - u));
    }
    for (std::size_t j = 1; j < ms.size(); ++j) monotone = monotone && gap[j] < gap[j - 1] && l2[j] < l2[j - 1];
    worst_final = std::max(worst_final, gap.back() / gap.front());
  }
  return {make_row(ctx, "mollifier_limit", "|B_m(u,v) - B(u,v)|_{H^-a} = |B(rho_m*u - u, v)|_{H^-a} -> 0 as m -> inf",
                   worst_final, 0.05, monotone && worst_final <= 0.05, pairs,
                   std::string("a = 3; m in {1,4,16,64}; strictly decreasing: ") + (monotone ? "yes" : "no") +
                       "; measured = worst gap(64)/gap(1)")};
}

// ---------------------------------------------------------------- linear theory

std::vector<LedgerRow> check_semigroup(const Ctx& ctx) {
  const std::vector<double> ts{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
  auto fitted = [&](const Grid& grid) {
    double best = 0.0;
    for (double t : ts) {
      double op = 0.0;
      for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        if (grid.is_nyquist(idx)) continue;
        const double k2 = grid.k_squared(idx);
        op = std::max(op, std::sqrt(1.0 + k2) * std::exp(-t * k2));
      }
      best = std::max(best, op / (1.0 + 1.0 / std::sqrt(t)));
    }
    return best;
  };
  const double c = fitted(Grid(3, 16)), f = fitted(Grid(3, 32));
  const double change = rel_change(c, f);
  return {make_row(ctx, "semigroup_smoothing", "|e^{-tA}|_{L(H^s;H^s')} <= M (1 + t^{-(s'-s)/2})", change, 0.2,
                   change <= 0.2, ts.size(),
                   "s = 0, s' = 1; exact operator norm over the lattice; fitted M " + fmt(f) +
                       "; relative change under n 16 -> 32")};
}

std::vector<LedgerRow> check_gn(const Ctx& ctx) {
  double worst = 0.0;
  std::size_t skipped = 0, count = 0;
  std::string note;
  for (int d : {2, 3}) {
    const Grid coarse(d, 16), fine(d, 32);
    std::vector<SpectralField> cs, fs;
    SpectralField constant(coarse);
    constant.at(0, 0) = 1.0;
    cs.push_back(constant);
    cs.push_back(single_mode_field(coarse, {1, 0, 0}, 1.0));
    for (std::size_t i = 0; cs.size() < ctx.samples + 2; ++i)
      cs.push_back(random_field(coarse, 3.0, 1.0, ctx.seed + 29 + static_cast<std::uint64_t>(d), i));
    for (const auto& v : cs) fs.push_back(resample(v, fine));
    const auto rc = gn_ratio_check(cs), rf = gn_ratio_check(fs);
    worst = std::max(worst, rel_change(rc.max_ratio, rf.max_ratio));
    skipped += rc.skipped;
    count += rc.evaluated;
    note += "d=" + std::to_string(d) + " max ratio " + fmt(rf.max_ratio) + "; ";
  }
  return {make_row(ctx, "gagliardo_nirenberg", "|u|_{L^4} <= C |u|_{L^2}^{1/4} |grad u|_{L^2}^{3/4}", worst, 0.15,
                   worst <= 0.15, count,
                   note + "2-d uses exponents 1/2, 1/2; skipped " + std::to_string(skipped) +
                       "; relative change under n 16 -> 32")};
}

// ---------------------------------------------------------------- stochastic parts

NoiseParams default_noise(int d, std::uint64_t seed) {
  NoiseParams p;
  p.g = 0.5;
  p.c0 = 1.0;
  p.r = 0.5 * d;
  p.seed = seed;
  return p;
}

std::vector<LedgerRow> check_ou_variance(const Ctx& ctx) {
  const Grid grid(2, 16);
  const double c = 1.0, nu = 1.0, gamma = 1.0, dt = 0.01;
  const NoiseModel model = NoiseModel::single_mode(grid, {1, 0, 0}, c, 0.5, Saturation::one, ctx.seed + 31);
  const std::size_t idx = grid.index_of({1, 0, 0});
  const double lambda = nu * grid.k_squared(idx) + gamma;
  const auto e = model.polarizations(idx)[0];
  const OuPropagator prop(model, dt, nu, gamma);
  const std::size_t seeds = ctx.pick(8, 32), steps = ctx.pick(3000, 10000), burn = 500;
  const SpectralField zero(grid);
  const std::function<double(std::size_t)> run = [&](std::size_t s) {
    SpectralField z(grid);
    std::vector<double> sq;
    for (std::size_t n = 0; n < steps; ++n) {
      prop.step(z, zero, sample_increment(model, dt, {model.seed(), s}, n));
      if (n < burn) continue;
      double x = 0.0;
      for (int comp = 0; comp < 2; ++comp) x += e[comp] * z.at(comp, idx).real();
      x *= std::sqrt(2.0 * grid.volume());
      sq.push_back(x * x);
    }
    return stats::mean_se(sq).mean;
  };
  const auto per_seed = parallel_map(seeds, 1, run);
  const auto ms = stats::mean_se(per_seed);
  const double oracle = c * c / (2.0 * lambda);
  const double z = std::abs(ms.mean - oracle) / ms.se;
  return {make_row(ctx, "ou_exact_variance", "dz + Az dt + gamma z dt = G(v) dw", z, 3.0, z <= 3.0, seeds,
                   "single mode lambda = 2; estimate " + fmt(ms.mean) + " vs c^2/(2 lambda) = " + fmt(oracle) +
                       "; measured in standard errors")};
}

std::vector<LedgerRow> check_zeta(const Ctx& ctx) {
  const Grid grid(2, 16);
  const NoiseModel model = NoiseModel::power_law(grid, default_noise(2, ctx.seed + 37));
  const std::vector<double> alphas{0, 1, 4, 16, 64, 256};
  const auto table = zeta_alpha_statistics(model, {1.0, 1.0, 0.01}, alphas, 3.0, ctx.pick(16, 100));
  const double ratio = table.rows.back().h2.mean / table.rows.front().h2.mean;
  return {make_row(ctx, "zeta_alpha_decay", "E|zeta^alpha(t)|_H^2 <= C_{alpha,2}, C_{alpha,2} -> 0 as alpha -> inf",
                   ratio, 0.05, table.monotone() && ratio <= 0.05, table.n_samples,
                   std::string("alpha in {0,1,4,16,64,256}; t = 3; non-increasing within 2 s.e.: ") +
                       (table.monotone() ? "yes" : "no") + "; measured = E(256)/E(0)")};
}

double residual_rate(bool nonlinear) {
  const Grid grid(2, 16);
  auto run = [&](double dt) {
    SolverConfig cfg(grid);
    cfg.dt = dt;
    cfg.t_end = 0.2;
    cfg.nonlinear = nonlinear;
    cfg.forcing = single_mode_field(grid, {1, 1, 0}, 1.0);
    // smooth data: the first-order regime needs dt * nu |k|^2 small where the energy sits
    const SpectralField x = random_field(grid, 4.0, 2.0, 41, 0);
    const auto traj = simulate(cfg, x);
    double worst = 0.0;
    for (std::size_t i = 1; i < traj.rows.size(); ++i) worst = std::max(worst, std::abs(traj.rows[i].energy_residual));
    return worst;
  };
  const double r1 = run(0.01), r2 = run(0.005), r3 = run(0.0025);
  return std::min(std::log2(r1 / r2), std::log2(r2 / r3));
}

std::vector<LedgerRow> check_energy(const Ctx& ctx) {
  const double lin = residual_rate(false), nonlin = residual_rate(true);
  const double rate = std::min(lin, nonlin);
  return {make_row(ctx, "energy_identity",
                   "1/2 d|u|_H^2/dt + |grad u|_{L^2}^2 + gamma |u|_H^2 = -<B(z+u,z+u),u> + <f,u>", rate, 0.9,
                   rate >= 0.9, 2,
                   "measured = min observed order of the max per-step residual, dt 0.01 -> 0.005 -> 0.0025; linear " + fmt(lin) +
                       ", nonlinear " + fmt(nonlin))};
}

std::vector<LedgerRow> check_gronwall(const Ctx& ctx) {
  const Grid grid(2, 16);
  SolverConfig cfg(grid);
  cfg.dt = 0.01;
  cfg.t_end = 2.0;
  cfg.noise = NoiseModel::power_law(grid, default_noise(2, ctx.seed + 43));
  cfg.forcing = single_mode_field(grid, {1, 0, 0}, 1.0);
  const SpectralField x = random_field(grid, 3.0, 1.0, ctx.seed + 43, 0);
  const std::size_t seeds = ctx.pick(8, 50);
  const auto runs = simulate_ensemble(cfg, x, seeds, 1);
  double sup = 0.0, grad = 0.0;
  bool ok_sup = true, ok_grad = true;
  for (const auto& t : runs) {
    const auto rep = gronwall_envelope_check(t, 10.0, 10.0);
    sup = std::max(sup, rep.worst_ratio);
    grad = std::max(grad, rep.grad_integral / rep.grad_budget);
    ok_sup = ok_sup && rep.holds_sup;
    ok_grad = ok_grad && rep.holds_grad;
  }
  const std::string note = "d = 2; C5 = C6 = 10; T = 2; every step recorded";
  return {make_row(ctx, "gronwall_sup", "sup_t |u(t)|_H^2 <= Psi(z,T) exp(Phi(z,T))", sup, 1.0, ok_sup, seeds, note),
          make_row(ctx, "gronwall_gradient", "int_0^T |grad u|_{L^2}^2 dt <= Psi + Phi Psi exp(Phi)", grad, 1.0,
                   ok_grad, seeds, note)};
}

std::vector<LedgerRow> check_contraction(const Ctx& ctx) {
  const Grid grid(3, 8);
  SolverConfig cfg(grid);
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  cfg.mollifier = {16.0};
  cfg.noise = NoiseModel::power_law(grid, default_noise(3, ctx.seed + 47));
  const std::size_t seeds = ctx.pick(2, 10);
  double worst = 0.0;
  bool ok = true;
  for (std::size_t s = 0; s < seeds; ++s) {
    const SpectralField x = random_field(grid, 3.0, 1.0, ctx.seed + 47, 2 * s);
    const SpectralField y = x + random_field(grid, 3.0, 1e-3, ctx.seed + 47, 2 * s + 1);
    ContractionOptions opt;
    opt.trajectory = s;
    const auto rep = twin_run_contraction(cfg, x, y, opt);
    worst = std::max(worst, rep.max_step_increase);
    ok = ok && rep.non_increasing;
  }
  SolverConfig short_cfg = cfg;
  short_cfg.t_end = 0.2;
  const SpectralField x = random_field(grid, 3.0, 1.0, ctx.seed + 47, 999);
  ContractionOptions same;
  same.m_hat = 1.0;
  const bool identical = twin_run_contraction(short_cfg, x, x, same).identical;
  return {make_row(ctx, "weighted_contraction", "d(exp(-int_0^t sigma) |V(t)|_{H^-g}^2) <= 0", worst, 1e-3,
                   ok && identical, seeds,
                   std::string("d = 3, n = 8, m = 16; measured = max per-step increase / initial; identical data stay "
                               "identical: ") +
                       (identical ? "yes" : "no"))};
}

std::vector<LedgerRow> check_z_lp(const Ctx& ctx) {
  const Grid grid(2, 16);
  const NoiseModel model = NoiseModel::power_law(grid, default_noise(2, ctx.seed + 53));
  const double dt = 0.01, p = 8.0 / 3.0;
  const std::vector<double> horizons{2, 4, 8, 16};
  const OuPropagator prop(model, dt, 1.0, 1.0);
  const SpectralField zero(grid);
  const std::size_t samples = ctx.pick(8, 32);
  const std::function<std::vector<double>(std::size_t)> run = [&](std::size_t s) {
    SpectralField z(grid);
    std::vector<double> out;
    double integral = 0.0, prev = 0.0;
    const auto steps = static_cast<std::size_t>(std::llround(horizons.back() / dt));
    for (std::size_t n = 1; n <= steps; ++n) {
      prop.step(z, zero, sample_increment(model, dt, {model.seed(), s}, n - 1));
      const double cur = std::pow(lp_norm(4.0, z), p);
      integral += 0.5 * dt * (prev + cur);
      prev = cur;
      for (double T : horizons)
        if (n == static_cast<std::size_t>(std::llround(T / dt))) out.push_back(integral);
    }
    return out;
  };
  const auto per = parallel_map(samples, 1, run);
  std::vector<double> ratio;
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    std::vector<double> v;
    for (const auto& r : per) v.push_back(r[j]);
    ratio.push_back(stats::mean_se(v).mean / (1.0 + horizons[j]));
  }
  const double spread = *std::max_element(ratio.begin(), ratio.end()) / *std::min_element(ratio.begin(), ratio.end());
  return {make_row(ctx, "z_lp_growth", "E|z|_{L^p(0,T;L^4)}^p <= C_8 (1+T)", spread, 2.0, spread <= 2.0, samples,
                   "p = 8/3; T in {2,4,8,16}; measured = max/min of E(T)/(1+T)")};
}

std::vector<LedgerRow> check_z_holder(const Ctx& ctx) {
  const Grid grid(2, 16);
  const double dt = 0.01;
  const std::vector<double> horizons{1, 2, 4, 8};
  const std::size_t every = 5;
  const std::size_t samples = ctx.pick(8, 32);
  double worst = 0.0;
  std::string note;
  for (double g : {0.1, 0.25, 0.75, 0.9}) {
    // beta + delta/2 = (1-g)/5 stays strictly inside (1-g)/2
    const double beta = 0.1 * (1.0 - g), delta = 0.2 * (1.0 - g);
    NoiseParams np = default_noise(2, ctx.seed + 59);
    np.g = g;
    np.r = 1.0 - g + 0.05;
    const NoiseModel model = NoiseModel::power_law(grid, np);
    const OuPropagator prop(model, dt, 1.0, 1.0);
    const SpectralField zero(grid);
    const std::function<std::vector<double>(std::size_t)> run = [&](std::size_t s) {
      SpectralField z(grid);
      std::vector<TimedField> snaps{{0.0, z}};
      const auto steps = static_cast<std::size_t>(std::llround(horizons.back() / dt));
      for (std::size_t n = 1; n <= steps; ++n) {
        prop.step(z, zero, sample_increment(model, dt, {model.seed(), s}, n - 1));
        if (n % every == 0) snaps.push_back({static_cast<double>(n) * dt, z});
      }
      std::vector<double> out;
      for (double T : horizons) {
        const auto count = static_cast<std::size_t>(std::llround(T / (dt * every))) + 1;
        out.push_back(holder_seminorm(beta, delta, std::span(snaps).first(count)).total());
      }
      return out;
    };
    const auto per = parallel_map(samples, 1, run);
    const double expo = 0.5 * (1.0 - g) - beta - 0.5 * delta;
    std::vector<double> ratio;
    for (std::size_t j = 0; j < horizons.size(); ++j) {
      std::vector<double> v;
      for (const auto& r : per) v.push_back(r[j]);
      ratio.push_back(stats::mean_se(v).mean / (1.0 + std::pow(horizons[j], expo)));
    }
    const double spread =
        *std::max_element(ratio.begin(), ratio.end()) / *std::min_element(ratio.begin(), ratio.end());
    worst = std::max(worst, spread);
    note += "g=" + fmt(g) + " spread " + fmt(spread) + "; ";
  }
  return {make_row(ctx, "z_holder_growth", "E|z|_{C^beta([0,T];H^delta)} <= C_9 (1 + T^{(1-g)/2 - beta - delta/2})",
                   worst, 2.0, worst <= 2.0, samples,
                   note + "beta = (1-g)/10, delta = (1-g)/5; T in {1,2,4,8}; measured = max/min of E(T)/(1+T^e)")};
}

// ---------------------------------------------------------------- plumbing

std::vector<LedgerRow> check_plumbing(const Ctx& ctx) {
  std::vector<LedgerRow> rows;
  const Grid grid(3, ctx.n);
  const SpectralField u = random_field(grid, 2.0, 1.0, ctx.seed + 61, 0);
  const SpectralField v = random_field(grid, 2.0, 1.0, ctx.seed + 61, 1);

  const double idem = sobolev_norm(0.0, leray_project(leray_project(u)) - leray_project(u));
  rows.push_back(make_row(ctx, "leray_idempotence", "plumbing", idem, 1e-12, idem <= 1e-12, 1, "|PPu - Pu|_H"));

  const SpectralField b = bilinear_B(u, v);
  const double herm = hermitian_defect(b), div = divergence_defect(b);
  rows.push_back(make_row(ctx, "b_output_structure", "plumbing", std::max(herm, div), 1e-10,
                          herm <= 1e-12 && div <= 1e-10, 1,
                          "hermitian defect " + fmt(herm) + ", divergence defect " + fmt(div)));

  const NoiseModel model = NoiseModel::power_law(grid, default_noise(3, ctx.seed + 61));
  const auto a1 = sample_increment(model, 0.01, {model.seed(), 3}, 17);
  const auto a2 = sample_increment(model, 0.01, {model.seed(), 3}, 17);
  const auto a3 = sample_increment(model, 0.01, {model.seed(), 3}, 18);
  const bool det = a1.xi == a2.xi && a1.xi != a3.xi;
  rows.push_back(make_row(ctx, "rng_determinism", "plumbing", det ? 0.0 : 1.0, 0.0, det, 3,
                          "same address gives the same increment; next step differs"));

  std::stringstream ss;
  write_snapshot(ss, {1.25, u});
  const TimedField back = read_snapshot(ss);
  const bool same = back.time == 1.25 && back.field.coeffs() == u.coeffs() && back.field.grid() == grid;
  rows.push_back(make_row(ctx, "snapshot_roundtrip", "plumbing", same ? 0.0 : 1.0, 0.0, same, 1, "bitwise"));
  return rows;
}

struct CheckEntry {
  std::vector<std::string> ids;
  std::function<std::vector<LedgerRow>(const Ctx&)> run;
};

std::vector<CheckEntry> registry() {
  return {
      {{"skew_symmetry", "transposition"}, check_skew},
      {{"h1_norm_identity"}, check_h1_identity},
      {{"b_l4_bound"}, check_b_l4},
      {{"bm_l4_bound"}, check_bm_l4},
      {{"bm_rho_l2_bound", "bm1_bound", "bm2_bound"}, check_bm_refinement},
      {{"b_h_minus_a_bound"}, check_b_h_minus_a},
      {{"mollifier_limit"}, check_mollifier_limit},
      {{"semigroup_smoothing"}, check_semigroup},
      {{"gagliardo_nirenberg"}, check_gn},
      {{"ou_exact_variance"}, check_ou_variance},
      {{"zeta_alpha_decay"}, check_zeta},
      {{"energy_identity"}, check_energy},
      {{"gronwall_sup", "gronwall_gradient"}, check_gronwall},
      {{"weighted_contraction"}, check_contraction},
      {{"z_lp_growth"}, check_z_lp},
      {{"z_holder_growth"}, check_z_holder},
      {{"leray_idempotence", "b_output_structure", "rng_determinism", "snapshot_roundtrip"}, check_plumbing},
  };
}

}  // namespace

std::vector<std::string> required_check_ids() {
  return {"b_h_minus_a_bound", "b_l4_bound",          "bm1_bound",           "bm2_bound",
          "bm_l4_bound",       "bm_rho_l2_bound",     "energy_identity",     "gagliardo_nirenberg",
          "gronwall_gradient", "gronwall_sup",        "h1_norm_identity",    "mollifier_limit",
          "ou_exact_variance", "semigroup_smoothing", "skew_symmetry",       "transposition",
          "weighted_contraction", "z_holder_growth",  "z_lp_growth",         "zeta_alpha_decay"};
}

RatioSummary gn_ratio_check(std::span<const SpectralField> samples) {
  RatioSummary out;
  for (const auto& u : samples) {
    const double grad = grad_l2_norm(u);
    if (!(grad > 0.0)) {
      ++out.skipped;
      continue;
    }
    const double a = u.grid().dim() == 3 ? 0.25 : 0.5;
    const double ratio = lp_norm(4.0, u) / (std::pow(sobolev_norm(0.0, u), a) * std::pow(grad, 1.0 - a));
    ++out.evaluated;
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  return out;
}

std::vector<LedgerRow> run_all(const VerifyOptions& options) {
  Ctx ctx{options.profile, options.profile == Profile::quick ? 16 : 32,
          options.profile == Profile::quick ? std::size_t{10} : std::size_t{100}, options.seed, options.bilinear};
  std::vector<CheckEntry> selected;
  for (auto& entry : registry()) {
    const bool wanted = options.only.empty() || std::any_of(entry.ids.begin(), entry.ids.end(), [&](const auto& id) {
                          return std::find(options.only.begin(), options.only.end(), id) != options.only.end();
                        });
    if (wanted) selected.push_back(std::move(entry));
  }
  const std::function<std::vector<LedgerRow>(std::size_t)> task = [&](std::size_t i) {
    try {
      return selected[i].run(ctx);
    } catch (const std::exception& e) {
      std::vector<LedgerRow> failed;
      for (const auto& id : selected[i].ids)
        failed.push_back(make_row(ctx, id, "error", kNaN, kNaN, false, 0, std::string("exception: ") + e.what()));
      return failed;
    }
  };
  std::vector<LedgerRow> ledger;
  for (auto& rows : parallel_map(selected.size(), resolve_workers(options.workers), task))
    for (auto& r : rows) ledger.push_back(std::move(r));

  if (options.only.empty()) {
    std::vector<std::string> missing;
    for (const auto& id : required_check_ids()) {
      const auto it = std::find_if(ledger.begin(), ledger.end(), [&](const LedgerRow& r) { return r.check_id == id; });
      if (it == ledger.end() || it->anchor.empty() || it->anchor == "plumbing" || it->anchor == "error")
        missing.push_back(id);
    }
    std::string note = "missing:";
    for (const auto& m : missing) note += " " + m;
    if (missing.empty()) note = "all anchored checks present";
    ledger.push_back(make_row(ctx, "ledger_completeness", "plumbing", static_cast<double>(missing.size()), 0.0,
                              missing.empty(), required_check_ids().size(), note));
  }
  std::sort(ledger.begin(), ledger.end(), [](const LedgerRow& a, const LedgerRow& b) { return a.check_id < b.check_id; });
  return ledger;
}

bool all_pass(std::span<const LedgerRow> ledger) {
  return std::all_of(ledger.begin(), ledger.end(), [](const LedgerRow& r) { return r.pass; });
}

void write_ledger_csv(std::ostream& os, std::span<const LedgerRow> ledger,
                      const std::vector<std::pair<std::string, std::string>>& metadata) {
  CsvWriter w(os, {"check_id", "anchor", "measured", "threshold", "pass", "samples", "digest", "note"}, metadata);
  for (const auto& r : ledger) {
    w.row(std::vector<std::string>{r.check_id, r.anchor, format_number(r.measured), format_number(r.threshold),
                                   r.pass ? "true" : "false", std::to_string(r.samples), r.digest, r.note});
  }
}

void write_ledger_text(std::ostream& os, std::span<const LedgerRow> ledger) {
  std::size_t passed = 0;
  for (const auto& r : ledger) {
    os << (r.pass ? "PASS " : "FAIL ") << r.check_id << "  measured=" << format_number(r.measured)
       << " threshold=" << format_number(r.threshold) << " samples=" << r.samples << "\n     " << r.anchor;
    if (!r.note.empty()) os << "\n     " << r.note;
    os << '\n';
    passed += r.pass ? 1 : 0;
  }
  os << passed << '/' << ledger.size() << " checks passed\n";
}

}  // namespace sdns
