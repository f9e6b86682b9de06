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

#include <array>
#include <cstdint>
#include <utility>

namespace sdns {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).  The output
/// is a pure function of (counter, key), so any draw can be regenerated
/// without replaying a sequence.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// SplitMix64 finalizer; used to derive independent keys from (seed, tag).
std::uint64_t mix64(std::uint64_t x);

/// Two uniforms in (0, 1) with 52 random bits each.
std::pair<double, double> uniform_pair(const Philox4x32::Counter& block);

/// Two independent standard normals from one Philox block (Box-Muller).
std::pair<double, double> normal_pair(const Philox4x32::Counter& block);

/// Purpose tags keep streams for different consumers disjoint.
enum class StreamTag : std::uint32_t { noise = 1, random_field = 2, initial_condition = 3, synthetic = 4 };

/// Deterministic stream of standard normals addressed by (seed, tag, stream, position).
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, StreamTag tag, std::uint64_t stream = 0);

  /// Normal pair at an explicit address; does not advance the stream.
  std::pair<double, double> at(std::uint64_t position, std::uint32_t lane = 0) const;
  double next();
  std::uint64_t position() const { return position_; }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sdns
