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

#include "sdns/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <sstream>

#include "sdns/csv.hpp"
#include "sdns/random_fields.hpp"

namespace sdns {

namespace {

using Type = RunConfig::Type;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_real(const std::string& s, double& out) {
  std::istringstream is(s);
  is >> out;
  return is && is.eof() && std::isfinite(out);
}

bool parse_int(const std::string& s, long& out) {
  std::istringstream is(s);
  is >> out;
  return is && is.eof();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

bool valid_value(const RunConfig::KeySpec& spec, const std::string& v) {
  double x;
  long i;
  switch (spec.type) {
    case Type::real:
      return parse_real(v, x);
    case Type::integer:
      return parse_int(v, i);
    case Type::boolean:
      return v == "true" || v == "false";
    case Type::text:
      return !v.empty();
    case Type::choice:
      return std::find(spec.choices.begin(), spec.choices.end(), v) != spec.choices.end();
    case Type::real_list: {
      const auto items = split_list(v);
      return !items.empty() && std::all_of(items.begin(), items.end(), [&](const auto& s) { return parse_real(s, x); });
    }
    case Type::int_list: {
      const auto items = split_list(v);
      return !items.empty() && std::all_of(items.begin(), items.end(), [&](const auto& s) { return parse_int(s, i); });
    }
    case Type::real_or_inf:
      return v == "inf" || parse_real(v, x);
    case Type::real_or_auto:
      return v == "auto" || parse_real(v, x);
  }
  return false;
}

}  // namespace

const std::vector<RunConfig::KeySpec>& RunConfig::schema() {
  static const std::vector<KeySpec> keys{
      {"grid.d", "2", Type::integer, {}, "spatial dimension (2 or 3)"},
      {"grid.n", "16", Type::integer, {}, "modes per axis (even, >= 8)"},
      {"grid.length", "6.283185307179586", Type::real, {}, "torus side L"},
      {"solver.nu", "1", Type::real, {}, "viscosity"},
      {"solver.gamma", "1", Type::real, {}, "linear damping (> 0)"},
      {"solver.alpha", "0", Type::real, {}, "extra damping of the stochastic part"},
      {"solver.mollifier", "inf", Type::real_or_inf, {}, "mollifier m; inf disables (d = 2 only)"},
      {"solver.dt", "0.01", Type::real, {}, "time step"},
      {"solver.t_end", "40", Type::real, {}, "final time"},
      {"solver.dealias", "two_thirds", Type::choice, {"two_thirds", "none"}, "dealiasing rule"},
      {"solver.nonlinear", "true", Type::boolean, {}, "include the convection term"},
      {"solver.observe_every", "10", Type::integer, {}, "steps between observable rows"},
      {"solver.snapshot_every", "0", Type::integer, {}, "steps between snapshots (0 = none)"},
      {"solver.delta", "0.5", Type::real, {}, "Sobolev index of the norm_Hdelta column"},
      {"forcing.kind", "none", Type::choice, {"none", "single_mode"}, "deterministic forcing"},
      {"forcing.amplitude", "1", Type::real, {}, "forcing amplitude"},
      {"forcing.k", "1,0,0", Type::int_list, {}, "forcing wavevector"},
      {"initial.kind", "random", Type::choice, {"zero", "random", "single_mode"}, "initial condition"},
      {"initial.amplitude", "1", Type::real, {}, "L2 norm (random) or amplitude (single_mode)"},
      {"initial.slope", "3", Type::real, {}, "spectral slope of the random initial condition"},
      {"initial.seed", "1", Type::integer, {}, "seed of the random initial condition"},
      {"initial.k", "1,0,0", Type::int_list, {}, "wavevector of the single-mode initial condition"},
      {"noise.g", "0.5", Type::real, {}, "roughness exponent in (0, 1)"},
      {"noise.c0", "1", Type::real, {}, "amplitude scale"},
      {"noise.r", "auto", Type::real_or_auto, {}, "amplitude decay; auto = d/2"},
      {"noise.psi", "one", Type::choice, {"one", "tanh"}, "saturation"},
      {"noise.seed", "1", Type::integer, {}, "noise seed"},
      {"tightness.beta", "0.125", Type::real, {}, "Hoelder exponent"},
      {"tightness.delta", "0.2", Type::real, {}, "Sobolev exponent"},
      {"tightness.p", "2.6666666666666665", Type::real, {}, "time integrability exponent"},
      {"estimator.burn_in", "auto", Type::real_or_auto, {}, "auto = max(10/gamma, t_end/2)"},
      {"estimator.horizon0", "auto", Type::real_or_auto, {}, "first KB horizon; auto = t_end / 2^doublings"},
      {"estimator.doublings", "2", Type::integer, {}, "number of horizon doublings"},
      {"estimator.radii", "0.75,1,1.25,1.5,2", Type::real_list, {}, "exceedance radii"},
      {"estimator.test_radius", "1", Type::real, {}, "radius of the bounded test functionals"},
      {"ensemble.size", "4", Type::integer, {}, "ensemble members"},
      {"ensemble.workers", "0", Type::integer, {}, "worker threads (0 = SDNS_WORKERS or 1)"},
      {"zeta.alphas", "0,1,4,16,64,256", Type::real_list, {}, "increasing alpha values"},
      {"zeta.t_probe", "3", Type::real, {}, "probe time"},
      {"zeta.samples", "32", Type::integer, {}, "Monte-Carlo samples"},
      {"zeta.coupled", "false", Type::boolean, {}, "drive G(v) with the full system instead of v = 0"},
      {"moll.m_grid", "4,16,64,256", Type::real_list, {}, "mollifier values"},
      {"moll.members", "8", Type::integer, {}, "ensemble members per m"},
      {"output.dir", "out", Type::text, {}, "output directory"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& k : schema()) values_[k.key] = k.fallback;
}

const RunConfig::KeySpec& RunConfig::spec(const std::string& key) const {
  for (const auto& k : schema())
    if (k.key == key) return k;
  throw Error("unknown configuration key '" + key + "'");
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const KeySpec& s = spec(key);
  const std::string v = trim(value);
  if (!valid_value(s, v)) throw Error("invalid value '" + v + "' for configuration key '" + key + "'");
  values_[key] = v;
}

RunConfig RunConfig::parse(std::istream& is, const std::string& source) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open configuration file " + path);
  return parse(is, path);
}

const std::string& RunConfig::raw(const std::string& key) const {
  spec(key);
  return values_.at(key);
}

double RunConfig::real(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "inf") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  if (!parse_real(v, x)) throw Error("configuration key '" + key + "' is not a number");
  return x;
}

long RunConfig::integer(const std::string& key) const {
  long x = 0;
  if (!parse_int(raw(key), x)) throw Error("configuration key '" + key + "' is not an integer");
  return x;
}

bool RunConfig::flag(const std::string& key) const { return raw(key) == "true"; }

std::vector<double> RunConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split_list(raw(key))) {
    double x = 0.0;
    parse_real(s, x);
    out.push_back(x);
  }
  return out;
}

std::vector<int> RunConfig::integers(const std::string& key) const {
  std::vector<int> out;
  for (const auto& s : split_list(raw(key))) {
    long x = 0;
    parse_int(s, x);
    out.push_back(static_cast<int>(x));
  }
  return out;
}

double RunConfig::burn_in() const {
  if (!is_auto("estimator.burn_in")) return real("estimator.burn_in");
  return default_burn_in(real("solver.gamma"), real("solver.t_end"));
}

double RunConfig::base_horizon() const {
  if (!is_auto("estimator.horizon0")) return real("estimator.horizon0");
  return real("solver.t_end") / std::pow(2.0, static_cast<double>(integer("estimator.doublings")));
}

std::string RunConfig::resolved() const {
  std::ostringstream os;
  for (const auto& k : schema()) {
    std::string v = values_.at(k.key);
    if (v == "auto") {
      if (k.key == "noise.r") v = format_number(0.5 * static_cast<double>(integer("grid.d")));
      if (k.key == "estimator.burn_in") v = format_number(burn_in());
      if (k.key == "estimator.horizon0") v = format_number(base_horizon());
    }
    os << k.key << " = " << v << '\n';
  }
  return os.str();
}

std::string RunConfig::digest() const {
  // Where the output goes and how many threads produce it do not change it.
  std::istringstream is(resolved());
  std::string line, kept;
  while (std::getline(is, line))
    if (line.rfind("output.dir ", 0) != 0 && line.rfind("ensemble.workers ", 0) != 0) kept += line + '\n';
  return hex_digest(kept);
}

Grid RunConfig::grid() const {
  try {
    return Grid(static_cast<int>(integer("grid.d")), static_cast<int>(integer("grid.n")), real("grid.length"));
  } catch (const Error& e) {
    throw Error(std::string("grid.d / grid.n / grid.length: ") + e.what());
  }
}

namespace {

std::array<int, 3> wavevector(const std::vector<int>& k, const std::string& key) {
  if (k.size() < 2 || k.size() > 3) throw Error("configuration key '" + key + "' needs 2 or 3 integers");
  return {k[0], k[1], k.size() > 2 ? k[2] : 0};
}

}  // namespace

NoiseModel RunConfig::noise(const Grid& g) const {
  NoiseParams p;
  p.g = real("noise.g");
  p.c0 = real("noise.c0");
  p.r = is_auto("noise.r") ? 0.5 * g.dim() : real("noise.r");
  p.psi = parse_saturation(raw("noise.psi"));
  p.seed = static_cast<std::uint64_t>(integer("noise.seed"));
  if (!(p.g > 0.0 && p.g < 1.0)) throw Error("noise.g must lie in (0, 1)");
  if (p.c0 < 0.0) throw Error("noise.c0 must be non-negative");
  if (p.r < 0.0) throw Error("noise.r must be non-negative");
  if (integer("noise.seed") < 0) throw Error("noise.seed must be non-negative");
  return NoiseModel::power_law(g, p);
}

SolverConfig RunConfig::solver() const {
  const Grid g = grid();
  SolverConfig cfg(g);
  cfg.nu = real("solver.nu");
  cfg.gamma = real("solver.gamma");
  cfg.alpha = real("solver.alpha");
  cfg.mollifier.m = real("solver.mollifier");
  cfg.dt = real("solver.dt");
  cfg.t_end = real("solver.t_end");
  cfg.dealias = raw("solver.dealias") == "none" ? DealiasRule::none() : DealiasRule::two_thirds();
  cfg.nonlinear = flag("solver.nonlinear");
  if (integer("solver.observe_every") < 1) throw Error("solver.observe_every must be at least 1");
  if (integer("solver.snapshot_every") < 0) throw Error("solver.snapshot_every must be non-negative");
  cfg.observe_every = static_cast<std::size_t>(integer("solver.observe_every"));
  cfg.snapshot_every = static_cast<std::size_t>(integer("solver.snapshot_every"));
  cfg.delta = real("solver.delta");
  cfg.noise = noise(g);
  if (raw("forcing.kind") == "single_mode")
    cfg.forcing = single_mode_field(g, wavevector(integers("forcing.k"), "forcing.k"), real("forcing.amplitude"));
  cfg.validate();
  return cfg;
}

SpectralField RunConfig::initial_condition(const Grid& g) const {
  const std::string kind = raw("initial.kind");
  if (kind == "zero") return SpectralField(g);
  if (kind == "single_mode")
    return single_mode_field(g, wavevector(integers("initial.k"), "initial.k"), real("initial.amplitude"));
  RandomFieldSpec spec;
  spec.slope = real("initial.slope");
  spec.l2_norm = real("initial.amplitude");
  if (spec.l2_norm < 0.0) throw Error("initial.amplitude must be non-negative");
  if (spec.l2_norm == 0.0) return SpectralField(g);
  return random_solenoidal_field(g, spec, static_cast<std::uint64_t>(integer("initial.seed")), 0);
}

ZTNormParams RunConfig::tightness() const {
  ZTNormParams p;
  p.beta = real("tightness.beta");
  p.delta = real("tightness.delta");
  p.p = real("tightness.p");
  return p;
}

}  // namespace sdns
