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
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "sdns/grid.hpp"

namespace sdns {
namespace {

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid(1, 16), Error);
  EXPECT_THROW(Grid(4, 16), Error);
  EXPECT_THROW(Grid(2, 6), Error);
  EXPECT_THROW(Grid(2, 15), Error);
  EXPECT_THROW(Grid(2, 16, 0.0), Error);
  EXPECT_THROW(Grid(2, 16, -1.0), Error);
}

TEST(Grid, SizesAndVolume) {
  const Grid g2(2, 8, 3.0);
  EXPECT_EQ(g2.size(), 64u);
  EXPECT_DOUBLE_EQ(g2.volume(), 9.0);
  EXPECT_DOUBLE_EQ(g2.k_unit(), 2.0 * std::numbers::pi / 3.0);
  const Grid g3(3, 8);
  EXPECT_EQ(g3.size(), 512u);
  EXPECT_NEAR(g3.volume(), std::pow(2.0 * std::numbers::pi, 3), 1e-9);
}

TEST(Grid, FftwOrderingOfLattice) {
  const Grid g(2, 8);
  // Row-major: the last axis varies fastest.
  EXPECT_EQ(g.lattice(0), (std::array<int, 3>{0, 0, 0}));
  EXPECT_EQ(g.lattice(1), (std::array<int, 3>{0, 1, 0}));
  EXPECT_EQ(g.lattice(5), (std::array<int, 3>{0, -3, 0}));
  EXPECT_EQ(g.lattice(8), (std::array<int, 3>{1, 0, 0}));
  EXPECT_TRUE(g.is_nyquist(4));
  EXPECT_TRUE(g.is_nyquist(4 * 8 + 1));
  EXPECT_FALSE(g.is_nyquist(3));
}

TEST(Grid, IndexOfInvertsLattice) {
  for (int d : {2, 3}) {
    const Grid g(d, 8);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (g.is_nyquist(idx)) continue;
      EXPECT_EQ(g.index_of(g.lattice(idx)), idx);
    }
    EXPECT_THROW(g.index_of({4, 0, 0}), Error);
    EXPECT_THROW(g.index_of({-4, 0, 0}), Error);
  }
}

TEST(Grid, MirrorAndCanonicalPartition) {
  for (int d : {2, 3}) {
    const Grid g(d, 8, 5.0);
    std::size_t canonical = 0, regular = 0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      const auto& k = g.lattice(idx);
      if (g.is_nyquist(idx)) {
        EXPECT_FALSE(g.is_canonical(idx));
        continue;
      }
      const auto& m = g.lattice(g.mirror(idx));
      for (int a = 0; a < 3; ++a) EXPECT_EQ(m[a], -k[a]);
      EXPECT_EQ(g.mirror(g.mirror(idx)), idx);
      if (idx != 0) {
        ++regular;
        EXPECT_NE(g.is_canonical(idx), g.is_canonical(g.mirror(idx)));
      }
      canonical += g.is_canonical(idx) ? 1 : 0;
    }
    EXPECT_FALSE(g.is_canonical(0));
    EXPECT_EQ(2 * canonical, regular);
    EXPECT_EQ(regular + 1, static_cast<std::size_t>(std::pow(7, d)));
  }
}

TEST(Grid, WavevectorScalesWithLength) {
  const Grid g(3, 8, 4.0);
  const double unit = 2.0 * std::numbers::pi / 4.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    double k2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      EXPECT_DOUBLE_EQ(g.wavevector(idx)[a], unit * g.lattice(idx)[a]);
      k2 += g.wavevector(idx)[a] * g.wavevector(idx)[a];
    }
    EXPECT_NEAR(g.k_squared(idx), k2, 1e-12);
  }
}

TEST(Grid, Equality) {
  EXPECT_EQ(Grid(2, 8), Grid(2, 8));
  EXPECT_FALSE(Grid(2, 8) == Grid(2, 16));
  EXPECT_FALSE(Grid(2, 8) == Grid(2, 8, 1.0));
  EXPECT_THROW(require_same_grid(Grid(2, 8), Grid(3, 8), "test"), Error);
}

// The transform pair must agree with the direct sum v(x) = sum vhat(k) exp(i k.x).
TEST(Fft, ForwardMatchesDirectSum) {
  const Grid g(2, 8, 3.0);
  std::vector<Complex> phys(g.size()), spec(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) phys[i] = Complex(std::sin(0.37 * double(i)) + 0.1 * double(i % 5), 0.0);
  fft::forward(g, phys, spec);
  const double h = g.length() / g.n();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    Complex direct(0.0, 0.0);
    for (std::size_t x = 0; x < g.size(); ++x) {
      const double x0 = h * double(x / 8), x1 = h * double(x % 8);
      const auto& k = g.wavevector(idx);
      const double phase = -(k[0] * x0 + k[1] * x1);
      direct += phys[x] * Complex(std::cos(phase), std::sin(phase));
    }
    direct /= double(g.size());
    EXPECT_NEAR(std::abs(direct - spec[idx]), 0.0, 1e-12);
  }
}

TEST(Fft, RoundTrip) {
  const Grid g(3, 8);
  std::vector<Complex> phys(g.size()), spec(g.size()), back(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) phys[i] = Complex(std::cos(0.11 * double(i * i % 97)), 0.0);
  fft::forward(g, phys, spec);
  fft::inverse(g, spec, back);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(back[i] - phys[i]), 0.0, 1e-12);
}

TEST(SpectralField, PhysicalRoundTripAndPointEvaluation) {
  const Grid g(2, 16, 2.5);
  const SpectralField v = testing::random_field(g, 7, 0);
  const auto phys = v.to_physical();
  const SpectralField back = SpectralField::from_physical(g, phys);
  for (std::size_t i = 0; i < v.coeffs().size(); ++i) EXPECT_NEAR(std::abs(back.coeffs()[i] - v.coeffs()[i]), 0.0, 1e-13);
  const double h = g.length() / g.n();
  const std::size_t x = 3 * 16 + 11;
  const auto direct = testing::evaluate_at(v, {h * 3, h * 11, 0.0});
  for (int c = 0; c < 2; ++c) EXPECT_NEAR(phys[c][x], direct[c], 1e-12);
}

TEST(SpectralField, ArithmeticAndStructure) {
  const Grid g(3, 8);
  const SpectralField u = testing::random_field(g, 1, 0);
  const SpectralField w = testing::random_field(g, 1, 1);
  const SpectralField s = 2.0 * u + w - u;
  for (std::size_t i = 0; i < s.coeffs().size(); ++i)
    EXPECT_NEAR(std::abs(s.coeffs()[i] - (u.coeffs()[i] + w.coeffs()[i])), 0.0, 1e-15);
  EXPECT_LT(hermitian_defect(u), 1e-14);
  EXPECT_LT(divergence_defect(u), 1e-12);
  EXPECT_TRUE(u.is_finite());
  SpectralField bad = u;
  bad.at(0, 1) = Complex(std::nan(""), 0.0);
  EXPECT_FALSE(bad.is_finite());
  EXPECT_THROW(SpectralField(g, std::vector<Complex>(5)), Error);
  SpectralField other(Grid(3, 16));
  EXPECT_THROW(other += u, Error);
}

TEST(SpectralField, ZeroNyquist) {
  const Grid g(2, 8);
  SpectralField v(g);
  for (std::size_t idx = 0; idx < g.size(); ++idx) v.at(0, idx) = Complex(1.0, 0.0);
  zero_nyquist(v);
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    EXPECT_EQ(v.at(0, idx), g.is_nyquist(idx) ? Complex(0.0, 0.0) : Complex(1.0, 0.0));
}

}  // namespace
}  // namespace sdns
