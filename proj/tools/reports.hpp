#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace toepexp::cli {

using Json = nlohmann::ordered_json;

/// One experiment's output: a table whose columns follow the published
/// table headers, plus provenance that only the JSON form carries.
struct Report {
  std::string command;
  Json config = Json::object();
  std::vector<std::string> columns;
  std::vector<Json> rows;  // objects keyed by column name (extra keys allowed)
  Json extra = Json::object();
};

/// Doubles in %.6e, integers verbatim, null as "NA"; header line first.
void write_csv(std::ostream& out, const Report& report);
/// {"command", "config", "rows", ...extra}, indented by two spaces.
void write_json(std::ostream& out, const Report& report);

}  // namespace toepexp::cli
