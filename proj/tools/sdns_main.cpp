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

#include <iostream>

#include <CLI11.hpp>

#include "sdns/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sdns: spectral solver for damped, noise-driven Navier-Stokes on the torus"};
  app.set_version_flag("--version", sdns::version_string());
  app.require_subcommand(1);

  sdns::CommandOptions opt;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  std::string out;
  std::vector<double> alphas;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides noise.seed)");
    sub->add_option("--workers", workers, "worker threads (default: SDNS_WORKERS or 1)");
    sub->add_option("--out", out, "output directory (overrides output.dir)");
    sub->add_option("--set", opt.overrides, "override a configuration key, key=value")->take_all();
  };

  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory and record observables");
  auto* invariant = app.add_subcommand("invariant", "ensemble time averages from v(0) = 0");
  auto* zeta = app.add_subcommand("zeta-alpha", "damped OU energy as a function of alpha");
  auto* moll = app.add_subcommand("moll-limit", "time averages across a mollifier sequence (d = 3)");
  auto* verify = app.add_subcommand("verify", "run the verification ledger");
  for (auto* sub : {simulate, invariant, zeta, moll, verify}) common(sub);
  zeta->add_option("--alphas", alphas, "comma separated alpha grid")->delimiter(',');
  verify->add_option("--profile", opt.profile, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  CLI11_PARSE(app, argc, argv);

  auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
  CLI::App* active = app.get_subcommands().front();
  if (given(active, "--seed")) opt.seed = seed;
  if (given(active, "--workers")) opt.workers = workers;
  if (given(active, "--out")) opt.out = out;
  if (active == zeta && given(zeta, "--alphas")) opt.alphas = alphas;

  if (active == simulate) return sdns::cmd_simulate(opt, std::cout, std::cerr);
  if (active == invariant) return sdns::cmd_invariant(opt, std::cout, std::cerr);
  if (active == zeta) return sdns::cmd_zeta_alpha(opt, std::cout, std::cerr);
  if (active == moll) return sdns::cmd_moll_limit(opt, std::cout, std::cerr);
  return sdns::cmd_verify(opt, std::cout, std::cerr);
}
