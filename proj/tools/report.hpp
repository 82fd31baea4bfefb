#pragma once

// Tabular reports: CSV (RFC 4180) or JSON {meta, rows}. Rows carry a fixed
// column order per subcommand; JSON rows may also carry extra fields that have
// no CSV column. Timings live only in meta so bodies stay reproducible.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace smk::cli {

using json = nlohmann::ordered_json;

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_value(const json& v) {
  if (v.is_string()) return csv_field(v.get<std::string>());
  if (v.is_null()) return "";
  return csv_field(v.dump());
}

class Report {
 public:
  explicit Report(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  json& meta() { return meta_; }

  /// Values in column order; `extra` is appended to the JSON row only.
  void add_row(std::vector<json> values, json extra = json::object()) {
    json row = json::object();
    for (std::size_t i = 0; i < columns_.size(); ++i) row[columns_[i]] = i < values.size() ? values[i] : json();
    for (auto& [k, v] : extra.items()) row[k] = v;
    rows_.push_back(std::move(row));
  }

  const json& rows() const { return rows_; }

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_field(columns_[i]);
    os << "\r\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_value(row[columns_[i]]);
      os << "\r\n";
    }
  }

  void write_json(std::ostream& os) const {
    json doc = json::object();
    doc["meta"] = meta_;
    doc["rows"] = rows_;
    os << doc.dump(2) << "\n";
  }

 private:
  std::vector<std::string> columns_;
  json meta_ = json::object();
  json rows_ = json::array();
};

}  // namespace smk::cli
