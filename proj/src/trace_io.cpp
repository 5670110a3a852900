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
#include "spindle/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "spindle/error.hpp"

namespace spindle {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_csv(const Table& table, std::ostream& os) {
  for (const auto& [key, value] : table.meta) os << "# " << key << "=" << value << "\n";
  for (size_t c = 0; c < table.columns.size(); ++c)
    os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c)
      os << format_double(row[c]) << (c + 1 < row.size() ? "," : "\n");
  }
}

void write_json(const Table& table, std::ostream& os) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json meta;
  for (const auto& [key, value] : table.meta) meta[key] = value;
  j["meta"] = std::move(meta);
  j["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) rows.push_back(row);
  j["rows"] = std::move(rows);
  os << j.dump(2) << "\n";
}

namespace {

std::string sibling_path(const std::string& base, const std::string& name) {
  size_t dot = base.find_last_of('.');
  size_t slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + "_" + name;
  return base.substr(0, dot) + "_" + name + base.substr(dot);
}

void write_one(const Table& table, const std::string& path, const std::string& format) {
  auto serialize = [&](std::ostream& os) {
    if (format == "csv")
      write_csv(table, os);
    else if (format == "json")
      write_json(table, os);
    else
      throw ValueError("unknown output format '" + format + "'");
  };
  if (path == "-") {
    serialize(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  serialize(out);
  if (!out.good()) throw IoError("write failed for '" + path + "'");
}

}  // namespace

void write_tables(const std::vector<Table>& tables, const std::string& out_path,
                  const std::string& format) {
  for (size_t i = 0; i < tables.size(); ++i) {
    std::string path = out_path;
    if (i > 0 && out_path != "-") path = sibling_path(out_path, tables[i].name);
    write_one(tables[i], path, format);
  }
}

}  // namespace spindle
