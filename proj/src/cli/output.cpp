// SPDX-License-Identifier: Apache-2.0

#include "luroth/cli/output.hpp"

namespace luroth::cli {

namespace {

std::string cell_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + cell_text(v[i]);
    return out + "]";
  }
  return v.dump();
}

// Quote only when the field would break the row.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_key_values(std::ostream& os, const char* label, const Json& obj) {
  for (const auto& [k, v] : obj.items()) os << "# " << label << ' ' << k << '=' << cell_text(v) << '\n';
}

}  // namespace

Json to_json(const OutputRecord& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = r.command;
  j["params"] = r.params;
  j["provenance"] = r.provenance;
  j["summary"] = r.summary;
  Json tables = Json::object();
  for (const Table& t : r.tables) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
      Json o = Json::object();
      for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i) o[t.columns[i]] = row[i];
      rows.push_back(std::move(o));
    }
    tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  j["tables"] = std::move(tables);
  return j;
}

void write_csv(std::ostream& os, const OutputRecord& r) {
  os << "# schema=" << kSchemaVersion << '\n';
  os << "# command=" << r.command << '\n';
  write_key_values(os, "param", r.params);
  os << "# provenance=" << r.provenance << '\n';
  write_key_values(os, "summary", r.summary);
  for (const Table& t : r.tables) {
    os << "# table " << t.name << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
      os << '\n';
    }
  }
}

void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

}  // namespace luroth::cli
