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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdns {

inline constexpr const char* kCsvSchema = "v1";

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a64(std::string_view data);
std::string hex_digest(std::string_view data);

/// Shortest decimal that round-trips; "nan" / "inf" / "-inf" otherwise.
std::string format_number(double value);

using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

/// Writes `# schema=v1`, one `# key=value` line per metadata entry, the
/// header row, then the data rows.  Cells containing commas or quotes are
/// quoted as in RFC 4180.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header, const CsvMetadata& metadata = {});
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
  std::size_t columns_;
};

struct CsvTable {
  CsvMetadata metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string schema() const;
  /// Column index by name; throws Error naming the missing column.
  std::size_t column(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
};

CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

}  // namespace sdns
