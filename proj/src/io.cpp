#include "larinf/io.hpp"

#include "larinf/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace larinf {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t row, std::size_t col, const std::string& what) {
  throw Error(ErrorKind::Parse, source + ": row " + std::to_string(row) + ", column " + std::to_string(col) + ": " + what);
}

nlohmann::json vec_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::isnan(v(i))) a.push_back(nullptr);
    else a.push_back(v(i));
  }
  return a;
}

Vector json_vec(const nlohmann::json& a) {
  Vector v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    v(static_cast<Index>(i)) = a[i].is_null() ? std::numeric_limits<double>::quiet_NaN() : a[i].get<double>();
  }
  return v;
}

}  // namespace

Table parse_csv(std::istream& in, const std::string& source) {
  Table t;
  std::string line;
  std::size_t row = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (t.header[c].empty()) t.header[c] = "x" + std::to_string(c + 1);
      }
      continue;
    }
    if (cells.size() != t.header.size()) {
      parse_fail(source, row, std::min(cells.size(), t.header.size()) + 1,
                 "expected " + std::to_string(t.header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> vals(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, vals[c]);
      if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(vals[c])) {
        parse_fail(source, row, c + 1, "cannot parse '" + cell + "' as a number");
      }
    }
    rows.push_back(std::move(vals));
  }
  if (t.header.empty()) throw Error(ErrorKind::Parse, source + ": missing header row");
  t.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) t.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  return t;
}

Table read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Parse, path + ": cannot open file");
  return parse_csv(f, path);
}

Dataset split_response(const Table& table, const std::string& response) {
  Index col = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == response) col = static_cast<Index>(c);
  }
  if (col < 0) {
    int idx = 0;
    const auto [ptr, ec] = std::from_chars(response.data(), response.data() + response.size(), idx);
    if (ec == std::errc() && ptr == response.data() + response.size() && idx >= 1 &&
        idx <= static_cast<int>(table.header.size())) {
      col = idx - 1;
    }
  }
  if (col < 0) throw Error(ErrorKind::Parse, "response column '" + response + "' not found");
  Dataset d;
  const Index p = table.values.cols() - 1;
  d.y = table.values.col(col);
  d.x.resize(table.values.rows(), p);
  Index out = 0;
  for (Index c = 0; c < table.values.cols(); ++c) {
    if (c == col) continue;
    d.x.col(out++) = table.values.col(c);
    d.names.push_back(table.header[c]);
  }
  return d;
}

nlohmann::json path_to_json(const LarPath& path, const std::vector<std::string>& names) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["kind"] = path.kind == PathKind::Sample ? "sample" : "population";
  doc["terminated_at"] = path.terminated_at;
  doc["final_correlation"] = path.final_correlation;
  doc["names"] = names;
  nlohmann::json steps = nlohmann::json::array();
  for (const LarStep& s : path.steps) {
    nlohmann::json j;
    j["entrant"] = s.entrant;
    if (s.entrant >= 0 && static_cast<std::size_t>(s.entrant) < names.size()) j["name"] = names[s.entrant];
    j["sign"] = s.sign;
    j["correlation"] = s.correlation;
    j["angle"] = s.angle;
    j["inv_angle_sq"] = s.inv_angle_sq;
    j["weight"] = s.weight;
    j["innovation_sq"] = s.innovation_sq;
    j["scale_u"] = s.scale_u;
    j["correlations"] = vec_json(s.correlations);
    j["equiangular_dots"] = vec_json(s.equiangular_dots);
    j["candidate_weights"] = vec_json(s.candidate_weights);
    steps.push_back(std::move(j));
  }
  doc["steps"] = std::move(steps);
  auto vec_list = [](const std::vector<Vector>& vs) {
    nlohmann::json a = nlohmann::json::array();
    for (const Vector& v : vs) a.push_back(vec_json(v));
    return a;
  };
  doc["coefficients"] = vec_list(path.coefficients);
  doc["directions"] = vec_list(path.directions);
  doc["innovations"] = vec_list(path.innovations);
  nlohmann::json ties = nlohmann::json::array();
  for (const TieDiagnostic& t : path.ties) {
    ties.push_back({{"step", t.step}, {"candidates", t.candidates}, {"chosen", t.chosen}});
  }
  doc["ties"] = std::move(ties);
  return doc;
}

LarPath path_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != 1) throw Error(ErrorKind::Parse, "unsupported schema_version");
    LarPath path;
    path.kind = doc.at("kind").get<std::string>() == "population" ? PathKind::Population : PathKind::Sample;
    path.terminated_at = doc.at("terminated_at").get<Index>();
    path.final_correlation = doc.at("final_correlation").get<double>();
    for (const auto& j : doc.at("steps")) {
      LarStep s;
      s.entrant = j.at("entrant").get<Index>();
      s.sign = j.at("sign").get<int>();
      s.correlation = j.at("correlation").get<double>();
      s.angle = j.at("angle").get<double>();
      s.inv_angle_sq = j.at("inv_angle_sq").get<double>();
      s.weight = j.at("weight").get<double>();
      s.innovation_sq = j.at("innovation_sq").get<double>();
      s.scale_u = j.at("scale_u").get<double>();
      s.correlations = json_vec(j.at("correlations"));
      s.equiangular_dots = json_vec(j.at("equiangular_dots"));
      s.candidate_weights = json_vec(j.at("candidate_weights"));
      path.steps.push_back(std::move(s));
    }
    for (const auto& v : doc.at("coefficients")) path.coefficients.push_back(json_vec(v));
    for (const auto& v : doc.value("directions", nlohmann::json::array())) path.directions.push_back(json_vec(v));
    for (const auto& v : doc.value("innovations", nlohmann::json::array())) path.innovations.push_back(json_vec(v));
    for (const auto& t : doc.value("ties", nlohmann::json::array())) {
      TieDiagnostic d;
      d.step = t.at("step").get<Index>();
      d.candidates = t.at("candidates").get<std::vector<Index>>();
      d.chosen = t.at("chosen").get<Index>();
      path.ties.push_back(std::move(d));
    }
    return path;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("path document: ") + e.what());
  }
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2); }

void write_path_csv(std::ostream& out, const LarPath& path, const std::vector<std::string>& names) {
  const Index p = path.steps.empty() ? 0 : path.steps.front().correlations.size();
  auto name = [&](Index j) {
    return j >= 0 && static_cast<std::size_t>(j) < names.size() ? names[j] : "x" + std::to_string(j + 1);
  };
  out << std::setprecision(17);
  out << "step,variable,index,sign,correlation,angle,weight";
  for (Index j = 0; j < p; ++j) out << ",abs_corr_" << name(j);
  for (Index j = 0; j < p; ++j) out << ",coef_" << name(j);
  out << '\n';
  for (Index k = 0; k < path.size(); ++k) {
    const LarStep& s = path.steps[k];
    out << k + 1 << ',' << name(s.entrant) << ',' << s.entrant + 1 << ',' << s.sign << ',' << s.correlation << ','
        << s.angle << ',' << s.weight;
    for (Index j = 0; j < p; ++j) out << ',' << std::abs(s.correlations(j));
    for (Index j = 0; j < p; ++j) out << ',' << path.coefficients[k](j);
    out << '\n';
  }
}

}  // namespace larinf
