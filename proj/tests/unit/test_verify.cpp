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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "sdns/csv.hpp"
#include "sdns/random_fields.hpp"
#include "sdns/spectral_ops.hpp"
#include "sdns/verify.hpp"

namespace sdns {
namespace {

using testing::random_field;
constexpr double kPi = std::numbers::pi;

const LedgerRow& find_row(const std::vector<LedgerRow>& ledger, const std::string& id) {
  const auto it = std::find_if(ledger.begin(), ledger.end(), [&](const LedgerRow& r) { return r.check_id == id; });
  if (it == ledger.end()) throw Error("no ledger row " + id);
  return *it;
}

// Shared across tests: the quick battery takes a couple of seconds.
const std::vector<LedgerRow>& quick_ledger() {
  static const std::vector<LedgerRow> ledger = run_all({.profile = Profile::quick});
  return ledger;
}

TEST(Profile, ParseAndName) {
  EXPECT_EQ(parse_profile("quick"), Profile::quick);
  EXPECT_EQ(parse_profile("full"), Profile::full);
  EXPECT_EQ(to_string(Profile::full), "full");
  EXPECT_THROW(parse_profile("medium"), Error);
}

TEST(Battery, QuickProfilePasses) {
  const auto& ledger = quick_ledger();
  for (const auto& r : ledger) EXPECT_TRUE(r.pass) << r.check_id << ": " << r.note;
  EXPECT_TRUE(all_pass(ledger));
}

TEST(Battery, OneAnchoredRowPerRequiredId) {
  const auto& ledger = quick_ledger();
  for (const auto& id : required_check_ids()) {
    const auto n = std::count_if(ledger.begin(), ledger.end(), [&](const LedgerRow& r) { return r.check_id == id; });
    EXPECT_EQ(n, 1) << id;
    const LedgerRow& r = find_row(ledger, id);
    EXPECT_FALSE(r.anchor.empty()) << id;
    EXPECT_NE(r.anchor, "plumbing") << id;
    EXPECT_GT(r.samples, 0u) << id;
    EXPECT_FALSE(r.digest.empty()) << id;
  }
  EXPECT_TRUE(find_row(ledger, "ledger_completeness").pass);
  EXPECT_TRUE(std::is_sorted(ledger.begin(), ledger.end(),
                             [](const LedgerRow& a, const LedgerRow& b) { return a.check_id < b.check_id; }));
}

TEST(Battery, DeterministicForFixedSeed) {
  const VerifyOptions opt{.profile = Profile::quick, .only = {"skew_symmetry", "ou_exact_variance"}};
  const auto a = run_all(opt);
  const auto b = run_all(opt);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].check_id, b[i].check_id);
    EXPECT_EQ(a[i].measured, b[i].measured);
    EXPECT_EQ(a[i].digest, b[i].digest);
  }
}

TEST(Battery, OnlyRestrictsTheRun) {
  const auto ledger = run_all({.profile = Profile::quick, .only = {"h1_norm_identity"}});
  EXPECT_NO_THROW(find_row(ledger, "h1_norm_identity"));
  EXPECT_THROW(find_row(ledger, "energy_identity"), Error);
}

// Harness self-test: flipping the first component of u breaks <B(u, v), v> = 0.
TEST(Battery, MutatedBilinearFailsSkewSymmetry) {
  VerifyOptions opt{.profile = Profile::quick, .only = {"skew_symmetry"}};
  opt.bilinear = [](const SpectralField& u, const SpectralField& v, const DealiasRule& rule) {
    SpectralField flipped = u;
    for (auto& c : flipped.component(0)) c = -c;
    return bilinear_B(flipped, v, rule);
  };
  const auto ledger = run_all(opt);
  const LedgerRow& r = find_row(ledger, "skew_symmetry");
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.measured, r.threshold);
  EXPECT_FALSE(all_pass(ledger));
}

TEST(Battery, ThrowingCheckIsRecordedAsFailure) {
  VerifyOptions opt{.profile = Profile::quick, .only = {"skew_symmetry"}};
  opt.bilinear = [](const SpectralField&, const SpectralField&, const DealiasRule&) -> SpectralField {
    throw Error("injected failure");
  };
  const auto ledger = run_all(opt);
  const LedgerRow& r = find_row(ledger, "skew_symmetry");
  EXPECT_FALSE(r.pass);
  EXPECT_NE(r.note.find("injected failure"), std::string::npos);
}

TEST(Ledger, CsvRoundTrip) {
  const auto& ledger = quick_ledger();
  std::ostringstream os;
  write_ledger_csv(os, ledger, {{"command", "verify"}, {"profile", "quick"}});
  std::istringstream is(os.str());
  const CsvTable t = read_csv(is);
  EXPECT_EQ(t.schema(), kCsvSchema);
  ASSERT_EQ(t.rows.size(), ledger.size());
  const auto measured = t.numbers("measured");
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    EXPECT_EQ(t.rows[i][t.column("check_id")], ledger[i].check_id);
    EXPECT_EQ(t.rows[i][t.column("anchor")], ledger[i].anchor);
    EXPECT_EQ(t.rows[i][t.column("note")], ledger[i].note);
    EXPECT_EQ(t.rows[i][t.column("pass")], ledger[i].pass ? "true" : "false");
    if (std::isfinite(ledger[i].measured)) EXPECT_EQ(measured[i], ledger[i].measured);
  }
}

TEST(Ledger, TextSummaryCountsPasses) {
  std::vector<LedgerRow> rows(3);
  rows[0] = {.check_id = "a", .anchor = "x", .pass = true};
  rows[1] = {.check_id = "b", .anchor = "y", .pass = false, .note = "why"};
  rows[2] = {.check_id = "c", .anchor = "z", .pass = true};
  std::ostringstream os;
  write_ledger_text(os, rows);
  const std::string s = os.str();
  EXPECT_NE(s.find("FAIL b"), std::string::npos);
  EXPECT_NE(s.find("why"), std::string::npos);
  EXPECT_NE(s.find("2/3 checks passed"), std::string::npos);
  EXPECT_FALSE(all_pass(rows));
}

// Components combine as (sum_c |u_c|_4^4)^{1/4}, so |a cos(k.x) e|_{L^4} =
// a (3/8 sum_c e_c^4)^{1/4} |T|^{1/4}.  The L^2 and gradient norms are
// a sqrt(|T|/2) and |k| a sqrt(|T|/2).
double single_mode_gn(int d, double kmag, double e4) {
  const double vol = std::pow(2.0 * kPi, d);
  const double a = d == 3 ? 0.25 : 0.5;
  return std::pow(3.0 / 8.0 * e4, 0.25) * std::pow(vol, 0.25) / std::sqrt(vol / 2.0) / std::pow(kmag, 1.0 - a);
}

TEST(GagliardoNirenberg, SingleModeOracle) {
  for (int d : {2, 3}) {
    const Grid g(d, 16);
    for (const std::array<int, 3> k : {std::array<int, 3>{1, 0, 0}, {1, 2, 0}, {2, 1, 1}}) {
      if (d == 2 && k[2] != 0) continue;
      const double kmag = std::sqrt(double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
      const std::array<double, 3> kd{double(k[0]), double(k[1]), double(k[2])};
      const auto e = polarization_basis(d, kd)[0];
      const double e4 = std::pow(e[0], 4) + std::pow(e[1], 4) + std::pow(e[2], 4);
      const std::vector<SpectralField> one{single_mode_field(g, k, 0.7)};
      const RatioSummary s = gn_ratio_check(one);
      EXPECT_EQ(s.evaluated, 1u);
      const double expect = single_mode_gn(d, kmag, e4);
      EXPECT_NEAR(s.max_ratio, expect, 1e-12 * expect) << d;
    }
  }
}

TEST(GagliardoNirenberg, ConstantFieldSkipped) {
  const Grid g(2, 8);
  SpectralField c(g);
  c.at(0, 0) = Complex(1.0, 0.0);
  const std::vector<SpectralField> samples{c, SpectralField(g)};
  const RatioSummary s = gn_ratio_check(samples);
  EXPECT_EQ(s.evaluated, 0u);
  EXPECT_EQ(s.skipped, 2u);
}

TEST(GagliardoNirenberg, StableUnderRefinement) {
  for (int d : {2, 3}) {
    const Grid coarse(d, 16), fine(d, 32);
    std::vector<SpectralField> a, b;
    for (std::uint64_t i = 0; i < 8; ++i) {
      a.push_back(random_field(coarse, 140 + d, i));
      b.push_back(resample(a.back(), fine));
    }
    const RatioSummary rc = gn_ratio_check(a), rf = gn_ratio_check(b);
    EXPECT_EQ(rc.evaluated, 8u);
    EXPECT_TRUE(refinement_stable(rc, rf, 0.15)) << rc.max_ratio << " vs " << rf.max_ratio;
  }
}

TEST(GagliardoNirenberg, ScaleInvariant) {
  const Grid g(3, 16);
  const SpectralField u = random_field(g, 150, 0);
  SpectralField v = u;
  for (int c = 0; c < 3; ++c)
    for (auto& x : v.component(c)) x *= 4.5;
  const std::vector<SpectralField> su{u}, sv{v};
  EXPECT_NEAR(gn_ratio_check(su).max_ratio, gn_ratio_check(sv).max_ratio, 1e-12);
}

}  // namespace
}  // namespace sdns
