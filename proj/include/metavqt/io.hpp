// Copyright 2026 The metavqt Authors
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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace metavqt {

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Shortest round-trippable decimal form.
std::string format_double(double x);

/// RFC 4180 quoting when needed.
std::string csv_field(std::string_view field);

using CsvCell = std::variant<double, std::string>;

/// A CSV table with a header row; numbers use format_double.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<CsvCell>> rows;

  std::string to_string() const;
};

}  // namespace metavqt
