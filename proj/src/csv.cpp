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

#include "flybelt/csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "flybelt/error.hpp"

namespace flybelt {

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

double parse_real(std::string_view text) {
  const std::string s(text);
  if (s.empty()) {
    throw ValidationError("empty number");
  }
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) {
    ++end;
  }
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw ValidationError(fmt::format("not a number: '{}'", s));
  }
  return v;
}

const std::vector<double>& CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return columns[i];
    }
  }
  throw ValidationError(fmt::format("missing CSV column '{}'", name));
}

std::string write_csv(std::span<const std::string> header,
                      std::span<const std::vector<double>* const> columns) {
  if (header.size() != columns.size()) {
    throw ValidationError("CSV header and column count differ");
  }
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += (i ? "," : "");
    out += header[i];
  }
  out += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
  for (const auto* c : columns) {
    if (c->size() != rows) {
      throw ValidationError("CSV columns have different lengths");
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out += (i ? "," : "");
      out += format_real((*columns[i])[r]);
    }
    out += '\n';
  }
  return out;
}

CsvTable read_csv(std::string_view text) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(l);
    while (std::getline(ls, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') {
        cell.pop_back();
      }
      cells.push_back(cell);
    }
    return cells;
  };
  if (!std::getline(in, line)) {
    throw ValidationError("empty CSV");
  }
  table.header = split(line);
  table.columns.resize(table.header.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") {
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ValidationError(fmt::format("CSV line {} has {} fields, expected {}", lineno,
                                        cells.size(), table.header.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      table.columns[i].push_back(parse_real(cells[i]));
    }
  }
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError(fmt::format("cannot open '{}'", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ValidationError(fmt::format("cannot write '{}'", tmp.string()));
    }
    out.write(contents.data(), std::streamsize(contents.size()));
    if (!out) {
      throw ValidationError(fmt::format("write failed for '{}'", tmp.string()));
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace flybelt
