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

#include "sdns/rng.hpp"

#include <cmath>
#include <numbers>

namespace sdns {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter counter, Key key) {
  counter = round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = round(counter, key);
  }
  return counter;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::pair<double, double> uniform_pair(const Philox4x32::Counter& block) {
  const std::uint64_t a = (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(block[2]) << 32) | block[3];
  constexpr double scale = 1.0 / 4503599627370496.0;  // 2^-52
  // Midpoints of 2^52 cells: the largest value 1 - 2^-53 is still representable.
  return {(static_cast<double>(a >> 12) + 0.5) * scale, (static_cast<double>(b >> 12) + 0.5) * scale};
}

std::pair<double, double> normal_pair(const Philox4x32::Counter& block) {
  const auto [u1, u2] = uniform_pair(block);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

GaussianStream::GaussianStream(std::uint64_t seed, StreamTag tag, std::uint64_t stream) : stream_(stream) {
  const std::uint64_t k = mix64(seed ^ (static_cast<std::uint64_t>(tag) << 56));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::pair<double, double> GaussianStream::at(std::uint64_t position, std::uint32_t lane) const {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(position), static_cast<std::uint32_t>(position >> 32), lane,
                                static_cast<std::uint32_t>(stream_)};
  return normal_pair(Philox4x32::generate(ctr, key_));
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto [a, b] = at(position_++);
  spare_ = b;
  has_spare_ = true;
  return a;
}

}  // namespace sdns
