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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdns/config.hpp"

namespace sdns {

/// Version string baked in at build time ("0.1.0+<git describe>").
std::string version_string();

struct CommandOptions {
  std::string config_path;  ///< empty: built-in defaults
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out;
  std::string profile = "quick";
  std::optional<std::vector<double>> alphas;
  std::vector<std::string> overrides;  ///< "key=value", applied after the file
};

/// Loads the file (if any), applies overrides, then --seed / --workers / --out.
RunConfig load_run_config(const CommandOptions& options);

/// Exit codes: 0 success, 1 run failure (or failed checks), 2 invalid configuration.
int cmd_simulate(const CommandOptions& options, std::ostream& log, std::ostream& err);
int cmd_invariant(const CommandOptions& options, std::ostream& log, std::ostream& err);
int cmd_zeta_alpha(const CommandOptions& options, std::ostream& log, std::ostream& err);
int cmd_moll_limit(const CommandOptions& options, std::ostream& log, std::ostream& err);
int cmd_verify(const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace sdns
