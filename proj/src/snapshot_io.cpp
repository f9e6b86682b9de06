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

#include "sdns/snapshot_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace sdns {

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
  std::uint64_t bits = 0;
  if constexpr (std::is_floating_point_v<T>) {
    bits = std::bit_cast<std::uint64_t>(value);
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

template <typename T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!is) throw Error("snapshot: unexpected end of stream");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if constexpr (std::is_same_v<T, double>) {
    return std::bit_cast<double>(bits);
  } else {
    return static_cast<T>(bits);
  }
}

}  // namespace

void write_snapshot(std::ostream& os, const TimedField& snapshot) {
  const Grid& grid = snapshot.field.grid();
  os.write("SDNS", 4);
  put_le<std::uint32_t>(os, kSnapshotVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(grid.dim()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(grid.n()));
  put_le<double>(os, grid.length());
  put_le<double>(os, snapshot.time);
  for (const Complex& c : snapshot.field.coeffs()) {
    put_le<double>(os, c.real());
    put_le<double>(os, c.imag());
  }
  if (!os) throw Error("snapshot: write failed");
}

TimedField read_snapshot(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "SDNS", 4) != 0) throw Error("snapshot: bad magic");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kSnapshotVersion) throw Error("snapshot: unsupported version " + std::to_string(version));
  const auto d = get_le<std::uint32_t>(is);
  const auto n = get_le<std::uint32_t>(is);
  const double length = get_le<double>(is);
  const double time = get_le<double>(is);
  Grid grid(static_cast<int>(d), static_cast<int>(n), length);
  std::vector<Complex> coeffs(grid.size() * d);
  for (auto& c : coeffs) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    c = Complex(re, im);
  }
  return TimedField{time, SpectralField(grid, std::move(coeffs))};
}

void write_snapshot_file(const std::string& path, const TimedField& snapshot) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("snapshot: cannot open " + path);
  write_snapshot(os, snapshot);
}

TimedField read_snapshot_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("snapshot: cannot open " + path);
  return read_snapshot(is);
}

}  // namespace sdns
