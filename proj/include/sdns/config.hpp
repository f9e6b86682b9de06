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

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sdns/estimators.hpp"
#include "sdns/integrator.hpp"
#include "sdns/noise_model.hpp"

namespace sdns {

/// Flat run configuration: `section.key = value` lines, `#` starts a comment.
/// Every key has a typed default; unknown keys and malformed values are
/// rejected with the key named in the message.
class RunConfig {
 public:
  enum class Type { real, integer, boolean, text, choice, real_list, int_list, real_or_inf, real_or_auto };

  struct KeySpec {
    std::string key;
    std::string fallback;
    Type type;
    std::vector<std::string> choices;
    std::string help;
  };

  RunConfig();
  static RunConfig parse(std::istream& is, const std::string& source = "<config>");
  static RunConfig load(const std::string& path);
  static const std::vector<KeySpec>& schema();

  void set(const std::string& key, const std::string& value);
  const std::string& raw(const std::string& key) const;
  bool is_auto(const std::string& key) const { return raw(key) == "auto"; }

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  /// All keys in schema order with "auto" values materialized.
  std::string resolved() const;
  /// FNV-1a digest of resolved() without output.dir and ensemble.workers.
  std::string digest() const;

  Grid grid() const;
  NoiseModel noise(const Grid& grid) const;
  /// Validated solver settings (throws Error naming the offending key).
  SolverConfig solver() const;
  SpectralField initial_condition(const Grid& grid) const;
  ZTNormParams tightness() const;
  double burn_in() const;
  double base_horizon() const;

 private:
  const KeySpec& spec(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

}  // namespace sdns
