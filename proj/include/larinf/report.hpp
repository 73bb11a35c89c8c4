#pragma once

#include "larinf/bootstrap.hpp"
#include "larinf/inference.hpp"
#include "larinf/simulate.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace larinf {

struct InferredPathReport {
  struct StepRow {
    Index step = 0;
    std::string variable;
    Index index = -1;
    int sign = 0;
    double S = 0.0;
    double threshold = 0.0;
    double correlation = 0.0;
    double lo = 0.0;
    double hi = 0.0;
  };
  struct CoefRow {
    std::string variable;
    Index index = -1;
    double coef = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double raw = 0.0;
  };

  Index n = 0;
  Index p = 0;
  Index m_bar = 0;
  double sigma_hat = 0.0;
  int draws = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::vector<std::string> names;
  std::vector<StepRow> steps;
  std::vector<CoefRow> terminal;
  IntervalSet intervals;
  std::vector<Vector> abs_correlations;  // |c_k| per step
  std::vector<Vector> coefficients;      // b_k per step
};

InferredPathReport build_report(const StandardizedData& data, const LarPath& path, const InferenceReport& inf,
                                const BootstrapSummary& boot, std::uint64_t seed);

nlohmann::json report_to_json(const InferredPathReport& r);
void write_report_csv(std::ostream& out, const InferredPathReport& r);

ScenarioSpec scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

void write_coverage_header(std::ostream& out);
void write_coverage_row(std::ostream& out, const ScenarioSpec& spec, const CoverageResult& c);

}  // namespace larinf
