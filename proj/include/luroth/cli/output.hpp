// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

namespace luroth::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "luroth/v1";

// Cells are strings or integers; reals are pre-formatted so the text is fixed.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void add(std::vector<Json> row) { rows.push_back(std::move(row)); }
};

struct OutputRecord {
  std::string command;
  Json params = Json::object();   // verbatim parameter echo
  std::string provenance;         // exact | high-precision | monte-carlo | empirical-fit, with a note
  Json summary = Json::object();  // scalar results
  std::vector<Table> tables;

  Table& table(std::string name, std::vector<std::string> columns) {
    tables.push_back({std::move(name), std::move(columns), {}});
    return tables.back();
  }
};

Json to_json(const OutputRecord& r);
// Header comment lines carry schema, command, params, provenance and summary;
// each table follows as "# table NAME", a header line and its rows.
void write_csv(std::ostream& os, const OutputRecord& r);
void write_json(std::ostream& os, const Json& j);

}  // namespace luroth::cli
