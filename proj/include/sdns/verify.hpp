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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sdns/nonlinearity.hpp"

namespace sdns {

enum class Profile { quick, full };

Profile parse_profile(const std::string& name);
std::string to_string(Profile profile);

/// One row of the verification ledger.  `anchor` is the inequality or
/// identity under test written as a formula, or "plumbing".
struct LedgerRow {
  std::string check_id;
  std::string anchor;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t samples = 0;
  std::string digest;
  std::string note;
};

using BilinearFn = std::function<SpectralField(const SpectralField&, const SpectralField&, const DealiasRule&)>;

struct VerifyOptions {
  Profile profile = Profile::quick;
  std::uint64_t seed = 20240601;
  std::size_t workers = 0;
  /// Replaces B in the skew-symmetry checks (harness self-test).
  BilinearFn bilinear;
  /// Restrict to these check ids (empty runs everything).
  std::vector<std::string> only;
};

/// Check ids that must be present for the battery to be complete.
std::vector<std::string> required_check_ids();

/// Runs the battery.  Failing checks are recorded, never thrown; a check
/// that throws is recorded as failed with the message in `note`.  Rows are
/// sorted by check id.
std::vector<LedgerRow> run_all(const VerifyOptions& options = {});

bool all_pass(std::span<const LedgerRow> ledger);

/// Worst |u|_{L^4} / (|u|_{L^2}^{a} |grad u|_{L^2}^{1-a}) with a = 1/4 in 3-d
/// and 1/2 in 2-d; fields with grad u = 0 are skipped.
RatioSummary gn_ratio_check(std::span<const SpectralField> samples);

void write_ledger_csv(std::ostream& os, std::span<const LedgerRow> ledger,
                      const std::vector<std::pair<std::string, std::string>>& metadata);
void write_ledger_text(std::ostream& os, std::span<const LedgerRow> ledger);

}  // namespace sdns
