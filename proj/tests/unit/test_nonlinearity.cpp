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
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "sdns/nonlinearity.hpp"
#include "sdns/spectral_ops.hpp"

namespace sdns {
namespace {

using testing::random_field;
constexpr double kPi = std::numbers::pi;

TEST(Dealias, TwoThirdsBand) {
  const Grid g(2, 16);
  const auto rule = DealiasRule::two_thirds();
  // 3 |k| < 16 keeps |k| <= 5.
  EXPECT_TRUE(rule.retains(g, g.index_of({5, -5, 0})));
  EXPECT_FALSE(rule.retains(g, g.index_of({6, 0, 0})));
  EXPECT_FALSE(rule.retains(g, g.index_of({0, -6, 0})));
  EXPECT_TRUE(DealiasRule::none().retains(g, g.index_of({7, -7, 0})));
  EXPECT_FALSE(DealiasRule::none().retains(g, 8));  // Nyquist row
  EXPECT_EQ(rule.name(), "two_thirds");
  EXPECT_EQ(DealiasRule::none().name(), "none");
}

TEST(Bilinear, ZeroInputGivesZero) {
  const Grid g(3, 8);
  const SpectralField v = random_field(g, 41, 0);
  EXPECT_EQ(sobolev_norm(0.0, bilinear_B(SpectralField(g), v)), 0.0);
  EXPECT_EQ(sobolev_norm(0.0, bilinear_Bm({1.0}, SpectralField(g), v)), 0.0);
}

TEST(Bilinear, LinearInEachArgument) {
  const Grid g(2, 16);
  const SpectralField u = random_field(g, 42, 0), w = random_field(g, 42, 1), v = random_field(g, 42, 2);
  const SpectralField lhs = bilinear_B(2.0 * u + w, v);
  const SpectralField rhs = 2.0 * bilinear_B(u, v) + bilinear_B(w, v);
  EXPECT_LT(sobolev_norm(0.0, lhs - rhs), 1e-13);
  const SpectralField lhs2 = bilinear_B(v, u - 3.0 * w);
  const SpectralField rhs2 = bilinear_B(v, u) - 3.0 * bilinear_B(v, w);
  EXPECT_LT(sobolev_norm(0.0, lhs2 - rhs2), 1e-13);
}

TEST(Bilinear, SkewSymmetry) {
  for (int d : {2, 3}) {
    const Grid g(d, 16, d == 2 ? 2 * kPi : 3.0);
    for (std::uint64_t i = 0; i < 10; ++i) {
      const SpectralField u = random_field(g, 43, 2 * i, 1.0), v = random_field(g, 43, 2 * i + 1, 1.0);
      const double scale = sobolev_norm(0.0, u) * std::pow(sobolev_norm(1.0, v), 2);
      EXPECT_LE(std::abs(inner_product(bilinear_B(u, v), v)), 1e-10 * scale);
      for (double m : {1.0, 10.0})
        EXPECT_LE(std::abs(inner_product(bilinear_Bm({m}, u, v), v)), 1e-10 * scale);
    }
  }
}

TEST(Bilinear, OutputIsRealSolenoidalAndBandLimited) {
  const Grid g(3, 8);
  const SpectralField b = bilinear_B(random_field(g, 44, 0), random_field(g, 44, 1));
  EXPECT_LT(hermitian_defect(b), 1e-13);
  EXPECT_LT(divergence_defect(b), 1e-12);
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (!DealiasRule::two_thirds().retains(g, idx))
      for (int c = 0; c < 3; ++c) EXPECT_EQ(b.at(c, idx), Complex(0.0, 0.0));
}

// P [ sum_{p+q=k} (uhat(p) . i q) vhat(q) ] restricted to the retained band.
TEST(Bilinear, MatchesDirectConvolution) {
  const Grid g(2, 8, 3.0);
  const auto rule = DealiasRule::two_thirds();
  const SpectralField u = dealias(random_field(g, 45, 0, 0.5), rule);
  const SpectralField v = dealias(random_field(g, 45, 1, 0.5), rule);
  SpectralField conv(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!rule.retains(g, p)) continue;
    for (std::size_t q = 0; q < g.size(); ++q) {
      if (!rule.retains(g, q)) continue;
      const auto& lp = g.lattice(p);
      const auto& lq = g.lattice(q);
      const std::array<int, 3> lk{lp[0] + lq[0], lp[1] + lq[1], 0};
      if (std::abs(lk[0]) >= 4 || std::abs(lk[1]) >= 4) continue;
      const std::size_t k = g.index_of(lk);
      if (!rule.retains(g, k)) continue;
      Complex adv(0.0, 0.0);
      for (int j = 0; j < 2; ++j) adv += u.at(j, p) * Complex(0.0, g.wavevector(q)[j]);
      for (int i = 0; i < 2; ++i) conv.at(i, k) += adv * v.at(i, q);
    }
  }
  const SpectralField oracle = leray_project(conv);
  const SpectralField b = bilinear_B(u, v, rule);
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) EXPECT_NEAR(std::abs(b.coeffs()[i] - oracle.coeffs()[i]), 0.0, 1e-14);
}

TEST(Mollify, InfiniteIsIdentity) {
  const Grid g(3, 8);
  const SpectralField u = random_field(g, 46, 0);
  const SpectralField w = mollify(MollifierParam::none(), u);
  EXPECT_EQ(w.coeffs(), u.coeffs());
  EXPECT_THROW(mollify({0.0}, u), Error);
  EXPECT_THROW(mollify({-1.0}, u), Error);
}

TEST(Mollify, ClosedFormMultiplier) {
  const Grid g(3, 8);
  const SpectralField u = single_mode_field(g, {1, 1, 0}, 1.0);
  const SpectralField w = mollify({1.0}, u);
  EXPECT_NEAR(sobolev_norm(0.0, w), std::exp(-1.0) * sobolev_norm(0.0, u), 1e-14);
}

TEST(Mollify, Contractive) {
  const Grid g(3, 8);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const SpectralField u = random_field(g, 47, i, 0.5);
    for (double m : {0.5, 4.0, 100.0}) EXPECT_LE(sobolev_norm(0.0, mollify({m}, u)), sobolev_norm(0.0, u));
  }
}

TEST(Mollify, LimitInNegativeNorm) {
  const Grid g(3, 16);
  for (std::uint64_t i = 0; i < 5; ++i) {
    const SpectralField u = random_field(g, 48, 2 * i, 4.0), v = random_field(g, 48, 2 * i + 1, 4.0);
    const SpectralField b = bilinear_B(u, v);
    double prev = std::numeric_limits<double>::infinity(), first = 0.0;
    for (double m : {1.0, 4.0, 16.0, 64.0}) {
      const double gap = sobolev_norm(-3.0, bilinear_Bm({m}, u, v) - b);
      // the gap is B applied to the mollification error
      EXPECT_NEAR(gap, sobolev_norm(-3.0, bilinear_B(mollify({m}, u) - u, v)), 1e-14);
      EXPECT_LT(gap, prev);
      if (m == 1.0) first = gap;
      prev = gap;
    }
    EXPECT_LE(prev, 0.05 * first);
  }
}

TEST(RhoNorm, UnitMassAndClosedForm) {
  for (double m : {0.3, 1.0, 64.0}) EXPECT_NEAR(rho_lp_norm(m, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(rho_lp_norm(2 * kPi, 2.0), std::pow(2.0, -0.75), 1e-14);
  EXPECT_THROW(rho_lp_norm(0.0, 2.0), Error);
  EXPECT_THROW(rho_lp_norm(1.0, 0.5), Error);
}

TEST(RhoNorm, MatchesRadialQuadrature) {
  // rho_m(x) = (m / 2 pi)^{3/2} exp(-m |x|^2 / 2); Simpson on 4 pi r^2 rho^p.
  const double m = 2 * kPi, p = 6.0 / 4.5;
  const double a = std::pow(m / (2 * kPi), 1.5);
  const int n = 20000;
  const double rmax = 20.0 / std::sqrt(m * p), h = rmax / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = h * i;
    const double f = 4 * kPi * r * r * std::pow(a * std::exp(-0.5 * m * r * r), p);
    sum += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  EXPECT_NEAR(rho_lp_norm(m, p), std::pow(sum * h / 3.0, 1.0 / p), 1e-10);
}

std::vector<FieldPair> pairs(const Grid& g, std::uint64_t seed, std::size_t count) {
  std::vector<FieldPair> out;
  for (std::size_t i = 0; i < count; ++i)
    out.emplace_back(random_field(g, seed, 2 * i, 1.0 + double(i % 3)), random_field(g, seed, 2 * i + 1, 2.0));
  return out;
}

TEST(BBounds, L4ConstantOne) {
  const Grid g(3, 16);
  const auto samples = pairs(g, 49, 12);
  for (double m : {1.0, 10.0, std::numeric_limits<double>::infinity()}) {
    const BBoundReport rep = check_B_bounds(samples, {m}, 0.5);
    EXPECT_EQ(rep.l4.evaluated, samples.size());
    EXPECT_LE(rep.l4.max_ratio, 1.05);
    EXPECT_GT(rep.l4.max_ratio, 0.0);
  }
}

TEST(BBounds, SingleLowModeRatioBelowOne) {
  const Grid g(3, 16);
  const SpectralField u = single_mode_field(g, {1, 0, 0}, 1.0) + single_mode_field(g, {0, 1, 0}, 0.5);
  const std::vector<FieldPair> one{{u, u}};
  const BBoundReport rep = check_B_bounds(one, {}, 0.5);
  EXPECT_EQ(rep.l4.evaluated, 1u);
  EXPECT_LT(rep.l4.max_ratio, 1.0);
}

TEST(BBounds, InfiniteMollifierSkipsRhoEstimates) {
  const Grid g(3, 8);
  const auto samples = pairs(g, 50, 3);
  const BBoundReport rep = check_B_bounds(samples, {}, 0.5);
  EXPECT_EQ(rep.rho_l2.evaluated, 0u);
  EXPECT_EQ(rep.rho_l2.skipped, 3u);
  EXPECT_EQ(rep.rough_u.skipped, 3u);
  const std::vector<FieldPair> zero{{SpectralField(g), samples[0].second}};
  EXPECT_EQ(check_B_bounds(zero, {1.0}, 0.5).l4.skipped, 1u);
}

TEST(BBounds, RoughEstimatesStableUnderRefinement) {
  const Grid coarse(3, 16), fine(3, 32);
  const auto samples = pairs(coarse, 51, 8);
  std::vector<FieldPair> refined;
  for (const auto& [u, v] : samples) refined.emplace_back(resample(u, fine), resample(v, fine));
  for (double m : {1.0, 10.0}) {
    const BBoundReport a = check_B_bounds(samples, {m}, 0.5), b = check_B_bounds(refined, {m}, 0.5);
    EXPECT_TRUE(refinement_stable(a.rho_l2, b.rho_l2, 0.2));
    EXPECT_TRUE(refinement_stable(a.rough_u, b.rough_u, 0.2));
    EXPECT_TRUE(refinement_stable(a.rough_v, b.rough_v, 0.2));
  }
}

TEST(BBounds, RefinementStableLogic) {
  RatioSummary a{1.0, 3, 0}, b{1.15, 3, 0}, c{1.3, 3, 0}, none{0.0, 0, 3};
  EXPECT_TRUE(refinement_stable(a, b, 0.2));
  EXPECT_FALSE(refinement_stable(a, c, 0.2));
  EXPECT_FALSE(refinement_stable(a, none, 0.2));
  EXPECT_TRUE(refinement_stable(none, none, 0.2));
}

}  // namespace
}  // namespace sdns
