/* Copyright 2026 The Spindle Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace spindle {

// One machine-readable result table. CSV serialization: '#'-prefixed
// key=value metadata lines, a column-name row, then data rows. The JSON
// mirror is {"meta": {...}, "columns": [...], "rows": [[...]]}.
struct Table {
  std::string name;  // "trace", "spectrum", ...
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Shortest round-trip decimal representation; bit-identical output for
// bit-identical doubles.
std::string format_double(double v);

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, std::ostream& os);

// Writes tables to out_path ("-" for stdout). Additional tables go to
// sibling files with "_<name>" inserted before the extension.
void write_tables(const std::vector<Table>& tables, const std::string& out_path,
                  const std::string& format);

}  // namespace spindle
