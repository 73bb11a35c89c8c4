#pragma once

#include "larinf/lar.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace larinf {

struct Table {
  std::vector<std::string> header;
  Matrix values;  // rows x header.size()
};

// Comma-separated, header row required, '.' decimal point. Parse errors carry
// the 1-based file row and column.
Table parse_csv(std::istream& in, const std::string& source = "<input>");
Table read_csv(const std::string& path);

struct Dataset {
  Matrix x;
  Vector y;
  std::vector<std::string> names;
};

// `response` is a header name or a 1-based column number.
Dataset split_response(const Table& table, const std::string& response);

// Reals are written with 17 significant digits so a round trip is exact.
nlohmann::json path_to_json(const LarPath& path, const std::vector<std::string>& names = {});
LarPath path_from_json(const nlohmann::json& doc);

std::string dump_json(const nlohmann::json& doc);

// Step table + correlation and coefficient traces, one row per step.
void write_path_csv(std::ostream& out, const LarPath& path, const std::vector<std::string>& names);

}  // namespace larinf
