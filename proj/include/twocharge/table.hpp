/*
 * Copyright 2026 The twocharge Authors
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

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace twocharge {

enum class Format { csv, json };

/// monostate is a missing value: empty in CSV, null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

/// Named-column output record set. Complex values are always stored as
/// two real columns (name_re, name_im).
class Table {
 public:
  Table(std::string name, std::vector<std::string> columns);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  void add_row(std::vector<Cell> row);

  /// CSV: header line then rows. JSON lines: one object per row with a
  /// "table" field naming the record set.
  void write(std::ostream& out, Format format) const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Writes several tables; CSV blocks are separated by a blank line.
void write_tables(std::ostream& out, const std::vector<Table>& tables, Format format);

/// Shortest decimal text that reads back to the same double; inf/nan as
/// "inf", "-inf", "nan".
std::string format_double(double v);

}  // namespace twocharge
