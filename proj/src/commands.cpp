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

#include "sdns/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sdns/csv.hpp"
#include "sdns/estimators.hpp"
#include "sdns/parallel.hpp"
#include "sdns/snapshot_io.hpp"
#include "sdns/verify.hpp"

#ifndef SDNS_VERSION
#define SDNS_VERSION "0.1.0+unknown"
#endif

namespace sdns {

namespace fs = std::filesystem;

std::string version_string() { return SDNS_VERSION; }

RunConfig load_run_config(const CommandOptions& options) {
  RunConfig cfg = options.config_path.empty() ? RunConfig() : RunConfig::load(options.config_path);
  for (const auto& o : options.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw Error("override '" + o + "' is not of the form key=value");
    cfg.set(o.substr(0, eq), o.substr(eq + 1));
  }
  if (options.seed) cfg.set("noise.seed", std::to_string(*options.seed));
  if (options.workers) cfg.set("ensemble.workers", std::to_string(*options.workers));
  if (options.out) cfg.set("output.dir", *options.out);
  return cfg;
}

namespace {

struct Run {
  RunConfig config;
  fs::path dir;
  CsvMetadata meta;
  std::size_t workers = 1;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

/// Creates the output directory and writes the resolved config and metadata.
Run prepare(const RunConfig& cfg, const std::string& command, const CsvMetadata& extra = {}) {
  Run run{cfg, fs::path(cfg.raw("output.dir")), {}, resolve_workers(static_cast<std::size_t>(
                                                         std::max<long>(0, cfg.integer("ensemble.workers"))))};
  fs::create_directories(run.dir);
  {
    auto os = open_out(run.dir / "resolved.cfg");
    os << "# resolved configuration; digest " << cfg.digest() << '\n' << cfg.resolved();
  }
  run.meta = {{"command", command},
              {"version", version_string()},
              {"config_digest", cfg.digest()},
              {"seed", cfg.raw("noise.seed")},
              {"grid", "d=" + cfg.raw("grid.d") + " n=" + cfg.raw("grid.n") + " L=" + cfg.raw("grid.length")},
              {"workers", std::to_string(run.workers)}};
  run.meta.insert(run.meta.end(), extra.begin(), extra.end());
  auto os = open_out(run.dir / "metadata.txt");
  for (const auto& [k, v] : run.meta) os << k << " = " << v << '\n';
  return run;
}

template <class Body>
int guarded(std::ostream& err, const CommandOptions& options, Body body) {
  RunConfig cfg;
  try {
    cfg = load_run_config(options);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    return body(cfg);
  } catch (const BlowUpError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_simulate(const CommandOptions& options, std::ostream& log, std::ostream& err) {
  return guarded(err, options, [&](const RunConfig& cfg) {
    const SolverConfig solver = cfg.solver();
    const SpectralField x = cfg.initial_condition(solver.grid);
    Run run = prepare(cfg, "simulate", {{"stiffness", format_number(solver.stiffness())}});
    const Trajectory traj = simulate(solver, x);
    {
      auto os = open_out(run.dir / "observables.csv");
      CsvWriter w(os, {"time", "norm_H", "norm_L4", "norm_Hdelta", "grad_u_L2", "z_L4", "energy_residual"}, run.meta);
      for (const auto& r : traj.rows)
        w.row(std::vector<double>{r.time, r.norm_H, r.norm_L4, r.norm_Hdelta, r.grad_u_L2, r.z_L4, r.energy_residual});
    }
    if (!traj.snapshots.empty()) {
      fs::create_directories(run.dir / "snapshots");
      for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "v_%06zu.bin", i);
        write_snapshot_file((run.dir / "snapshots" / name).string(), traj.snapshots[i]);
      }
    }
    log << "simulate: " << traj.rows.size() << " rows, final |v|_H = " << format_number(traj.rows.back().norm_H)
        << ", output in " << run.dir.string() << '\n';
    return 0;
  });
}

int cmd_invariant(const CommandOptions& options, std::ostream& log, std::ostream& err) {
  return guarded(err, options, [&](const RunConfig& cfg) {
    const SolverConfig solver = cfg.solver();
    const long members = cfg.integer("ensemble.size");
    if (members < 2) throw Error("ensemble.size must be at least 2 for the invariant command");
    const double t0 = cfg.base_horizon();
    const auto doublings = static_cast<std::size_t>(std::max<long>(0, cfg.integer("estimator.doublings")));
    const double last = t0 * std::pow(2.0, static_cast<double>(doublings));
    if (t0 < 1.0) throw Error("estimator.horizon0 must be at least 1");
    if (last > solver.t_end * (1.0 + 1e-12)) throw Error("estimator.horizon0 * 2^doublings exceeds solver.t_end");
    const double burn = cfg.burn_in();
    if (!(burn < solver.t_end)) throw Error("estimator.burn_in must be below solver.t_end");
    const auto radii = cfg.reals("estimator.radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
      if (!(radii[i] > radii[i - 1])) throw Error("estimator.radii must be increasing");

    std::string members_list;
    for (long i = 0; i < members; ++i) members_list += (i ? " " : "") + std::to_string(i);
    Run run = prepare(cfg, "invariant", {{"initial", "zero"}, {"trajectories", members_list}});
    const auto panel = default_panel(solver.grid, cfg.real("estimator.test_radius"));
    SimulateOptions sim;
    for (const auto& p : panel) sim.functionals.push_back(p.functional());
    const auto ensemble =
        simulate_ensemble(solver, SpectralField(solver.grid), static_cast<std::size_t>(members), run.workers, sim);

    const KBReport kb = kb_report(ensemble, panel, t0, doublings);
    {
      auto os = open_out(run.dir / "kb_report.csv");
      CsvWriter w(os, {"observable", "horizon", "mean", "se", "gap", "members"}, run.meta);
      for (std::size_t o = 0; o < kb.observables.size(); ++o)
        for (std::size_t j = 0; j < kb.horizons.size(); ++j)
          w.row(std::vector<std::string>{kb.observables[o], format_number(kb.horizons[j]),
                                         format_number(kb.averages[o][j].mean), format_number(kb.averages[o][j].se),
                                         j == 0 ? "nan" : format_number(kb.gaps[o][j - 1]),
                                         std::to_string(kb.members)});
    }
    const ExceedanceTable ex = exceedance_table(ensemble, radii, kb.horizons);
    {
      auto os = open_out(run.dir / "exceedance.csv");
      CsvWriter w(os, {"horizon", "radius", "mean", "se"}, run.meta);
      for (std::size_t h = 0; h < ex.horizons.size(); ++h)
        for (std::size_t r = 0; r < ex.radii.size(); ++r)
          w.row(std::vector<double>{ex.horizons[h], ex.radii[r], ex.fraction[h][r].mean, ex.fraction[h][r].se});
    }
    std::size_t passed = 0, conclusive = 0;
    {
      auto os = open_out(run.dir / "stationarity.csv");
      CsvWriter w(os, {"member", "observable", "ks", "p_value", "ess_first", "ess_second", "inconclusive"}, run.meta);
      for (std::size_t m = 0; m < ensemble.size(); ++m)
        for (const auto& phi : panel) {
          const auto res = stationarity_diagnostic(ensemble[m], phi, burn);
          w.row(std::vector<std::string>{std::to_string(m), phi.name(), format_number(res.ks),
                                         format_number(res.p_value), format_number(res.ess_first),
                                         format_number(res.ess_second), res.inconclusive ? "true" : "false"});
          conclusive += res.inconclusive ? 0 : 1;
          passed += res.passes(0.01) ? 1 : 0;
        }
    }
    log << "invariant: " << members << " members; exceedance monotone in R: "
        << (ex.monotone_in_radius() ? "yes" : "no") << "; stationarity passes at 1%: " << passed << '/' << conclusive
        << " conclusive; output in " << run.dir.string() << '\n';
    return 0;
  });
}

int cmd_zeta_alpha(const CommandOptions& options, std::ostream& log, std::ostream& err) {
  return guarded(err, options, [&](const RunConfig& cfg) {
    const SolverConfig solver = cfg.solver();
    const std::vector<double> alphas = options.alphas ? *options.alphas : cfg.reals("zeta.alphas");
    const long samples = cfg.integer("zeta.samples");
    if (samples < 10) throw Error("zeta.samples must be at least 10");
    DriverFactory driver;
    const bool coupled = cfg.flag("zeta.coupled") && !solver.noise.additive();
    if (coupled) driver = coupled_driver(solver, cfg.initial_condition(solver.grid));
    std::string alpha_list;
    for (double a : alphas) alpha_list += (alpha_list.empty() ? "" : " ") + format_number(a);
    Run run = prepare(cfg, "zeta-alpha", {{"alphas", alpha_list}, {"driver", coupled ? "coupled" : "zero"}});
    const auto table = zeta_alpha_statistics(solver.noise, {solver.nu, solver.gamma, solver.dt}, alphas,
                                             cfg.real("zeta.t_probe"), static_cast<std::size_t>(samples), driver);
    auto os = open_out(run.dir / "zeta_alpha.csv");
    CsvWriter w(os, {"alpha", "h2_mean", "h2_se", "l4_4_mean", "l4_4_se", "non_increasing"}, run.meta);
    for (const auto& r : table.rows)
      w.row(std::vector<std::string>{format_number(r.alpha), format_number(r.h2.mean), format_number(r.h2.se),
                                     format_number(r.l4_4.mean), format_number(r.l4_4.se),
                                     r.non_increasing ? "true" : "false"});
    log << "zeta-alpha: " << table.rows.size() << " rows; non-increasing: " << (table.monotone() ? "yes" : "no")
        << "; output in " << run.dir.string() << '\n';
    return 0;
  });
}

int cmd_moll_limit(const CommandOptions& options, std::ostream& log, std::ostream& err) {
  return guarded(err, options, [&](const RunConfig& loaded) {
    RunConfig cfg = loaded;
    const auto ms = cfg.reals("moll.m_grid");
    if (cfg.integer("grid.d") != 3) throw Error("grid.d must be 3 for the moll-limit command");
    for (double m : ms)
      if (!(m > 0.0)) throw Error("moll.m_grid entries must be positive");
    cfg.set("solver.mollifier", format_number(ms.front()));
    const SolverConfig solver = cfg.solver();
    const long members = cfg.integer("moll.members");
    if (members < 1) throw Error("moll.members must be at least 1");
    Run run = prepare(cfg, "moll-limit");
    const auto panel = default_panel(solver.grid, cfg.real("estimator.test_radius"));
    MollificationStudyOptions opt;
    opt.members = static_cast<std::size_t>(members);
    opt.workers = run.workers;
    opt.burn_in = cfg.burn_in();
    const auto study = mollification_limit_study(solver, ms, cfg.initial_condition(solver.grid), panel, opt);
    auto os = open_out(run.dir / "moll_limit.csv");
    CsvWriter w(os, {"m", "observable", "mean", "se", "gap"}, run.meta);
    for (std::size_t j = 0; j < study.levels.size(); ++j)
      for (std::size_t o = 0; o < panel.size(); ++o)
        w.row(std::vector<std::string>{format_number(study.levels[j].m), study.observables[o],
                                       format_number(study.levels[j].averages[o].mean),
                                       format_number(study.levels[j].averages[o].se),
                                       j == 0 ? "nan" : format_number(study.gaps[o][j - 1])});
    log << "moll-limit: " << study.levels.size() << " levels x " << members << " members; output in "
        << run.dir.string() << '\n';
    return 0;
  });
}

int cmd_verify(const CommandOptions& options, std::ostream& log, std::ostream& err) {
  return guarded(err, options, [&](const RunConfig& cfg) {
    VerifyOptions vo;
    vo.profile = parse_profile(options.profile);
    if (options.seed) vo.seed = *options.seed;
    vo.workers = resolve_workers(static_cast<std::size_t>(std::max<long>(0, cfg.integer("ensemble.workers"))));
    Run run = prepare(cfg, "verify", {{"profile", to_string(vo.profile)}, {"verify_seed", std::to_string(vo.seed)}});
    const auto ledger = run_all(vo);
    {
      auto os = open_out(run.dir / "ledger.csv");
      write_ledger_csv(os, ledger, run.meta);
    }
    {
      auto os = open_out(run.dir / "ledger.txt");
      write_ledger_text(os, ledger);
    }
    write_ledger_text(log, ledger);
    return all_pass(ledger) ? 0 : 1;
  });
}

}  // namespace sdns
