// Copyright 2026 The flybelt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-text helpers shared by the exporters: numeric CSV tables, 17-digit
// decimal formatting and atomic file replacement.

#ifndef FLYBELT_CSV_HPP_
#define FLYBELT_CSV_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flybelt {

// Shortest-safe decimal: 17 significant digits, round-trips every double.
std::string format_real(double v);

// Parses a full decimal string; throws ValidationError on trailing garbage.
double parse_real(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(std::string_view name) const;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

std::string write_csv(std::span<const std::string> header,
                      std::span<const std::vector<double>* const> columns);
CsvTable read_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace flybelt

#endif  // FLYBELT_CSV_HPP_
