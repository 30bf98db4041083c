#include "reports.hpp"

#include <cstdio>
#include <ostream>

namespace toepexp::cli {

namespace {

std::string csv_cell(const Json& value) {
  if (value.is_null()) return "NA";
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer() || value.is_number_unsigned()) return value.dump();
  if (value.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", value.get<double>());
    return buf;
  }
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

}  // namespace

void write_csv(std::ostream& out, const Report& report) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << report.columns[i];
  out << '\n';
  for (const Json& row : report.rows) {
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
      const auto it = row.find(report.columns[i]);
      out << (i ? "," : "") << (it == row.end() ? std::string("NA") : csv_cell(*it));
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Report& report) {
  Json doc = Json::object();
  doc["command"] = report.command;
  doc["config"] = report.config;
  doc["rows"] = report.rows;
  for (const auto& [key, value] : report.extra.items()) doc[key] = value;
  out << doc.dump(2) << '\n';
}

}  // namespace toepexp::cli
