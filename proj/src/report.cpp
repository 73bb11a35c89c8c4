#include "larinf/report.hpp"

#include "larinf/error.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace larinf {

namespace {

nlohmann::json vec_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

InferredPathReport build_report(const StandardizedData& data, const LarPath& path, const InferenceReport& inf,
                                const BootstrapSummary& boot, std::uint64_t seed) {
  InferredPathReport r;
  r.n = data.n();
  r.p = data.p();
  r.m_bar = inf.m_bar;
  r.sigma_hat = inf.sigma_hat;
  r.draws = boot.draws;
  r.alpha = boot.alpha;
  r.seed = seed;
  r.names = data.names;
  for (Index k = 0; k < path.size(); ++k) {
    const LarStep& s = path.steps[k];
    InferredPathReport::StepRow row;
    row.step = k + 1;
    row.index = s.entrant;
    row.variable = data.names[s.entrant];
    row.sign = s.sign;
    row.S = inf.S(k);
    row.threshold = inf.thresholds(k);
    row.correlation = s.correlation;
    row.lo = boot.intervals.correlation[k].first;
    row.hi = boot.intervals.correlation[k].second;
    r.steps.push_back(row);
    r.abs_correlations.push_back(s.correlations.cwiseAbs());
    r.coefficients.push_back(path.coefficients[k]);
  }
  if (inf.m_bar > 0) {
    const auto& cols = boot.intervals.coefficient_index.back();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      InferredPathReport::CoefRow row;
      row.index = cols[i];
      row.variable = data.names[cols[i]];
      row.coef = boot.terminal.b_bar(cols[i]);
      row.raw = boot.terminal.raw_scale(cols[i]);
      row.lo = boot.intervals.coefficient.back()[i].first;
      row.hi = boot.intervals.coefficient.back()[i].second;
      r.terminal.push_back(row);
    }
  }
  r.intervals = boot.intervals;
  return r;
}

nlohmann::json report_to_json(const InferredPathReport& r) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["n"] = r.n;
  doc["p"] = r.p;
  doc["m_bar"] = r.m_bar;
  doc["sigma_hat"] = r.sigma_hat;
  doc["draws"] = r.draws;
  doc["alpha"] = r.alpha;
  doc["seed"] = r.seed;
  doc["names"] = r.names;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"step", s.step},
                     {"variable", s.variable},
                     {"index", s.index},
                     {"sign", s.sign},
                     {"S", s.S},
                     {"threshold", s.threshold},
                     {"correlation", s.correlation},
                     {"lo", s.lo},
                     {"hi", s.hi}});
  }
  doc["steps"] = std::move(steps);
  nlohmann::json term = nlohmann::json::array();
  for (const auto& c : r.terminal) {
    term.push_back({{"variable", c.variable}, {"index", c.index}, {"coef", c.coef}, {"lo", c.lo}, {"hi", c.hi},
                    {"raw", c.raw}});
  }
  doc["terminal_coefficients"] = std::move(term);
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t k = 0; k < r.intervals.coefficient.size(); ++k) {
    for (std::size_t i = 0; i < r.intervals.coefficient[k].size(); ++i) {
      const Index j = r.intervals.coefficient_index[k][i];
      cells.push_back({{"step", k + 1},
                       {"variable", r.names[j]},
                       {"coef", k + 1 == r.intervals.coefficient.size() && !r.terminal.empty()
                                    ? r.terminal[i].coef
                                    : r.coefficients[k](j)},
                       {"lo", r.intervals.coefficient[k][i].first},
                       {"hi", r.intervals.coefficient[k][i].second}});
    }
  }
  doc["coefficient_intervals"] = std::move(cells);
  nlohmann::json mem = nlohmann::json::array();
  for (Index j = 0; j < r.intervals.membership.rows(); ++j) mem.push_back(vec_json(r.intervals.membership.row(j)));
  doc["membership"] = std::move(mem);
  nlohmann::json ac = nlohmann::json::array();
  nlohmann::json co = nlohmann::json::array();
  for (const Vector& v : r.abs_correlations) ac.push_back(vec_json(v));
  for (const Vector& v : r.coefficients) co.push_back(vec_json(v));
  doc["traces"] = {{"abs_correlations", std::move(ac)}, {"coefficients", std::move(co)}};
  return doc;
}

void write_report_csv(std::ostream& out, const InferredPathReport& r) {
  out << std::setprecision(17);
  out << "section,step,variable,sign,S,threshold,correlation,lo,hi\n";
  for (const auto& s : r.steps) {
    out << "step," << s.step << ',' << s.variable << ',' << s.sign << ',' << s.S << ',' << s.threshold << ','
        << s.correlation << ',' << s.lo << ',' << s.hi << '\n';
  }
  for (const auto& c : r.terminal) {
    out << "terminal," << r.m_bar << ',' << c.variable << ",,,," << c.coef << ',' << c.lo << ',' << c.hi << '\n';
  }
}

ScenarioSpec scenario_from_json(const nlohmann::json& doc) {
  ScenarioSpec s;
  try {
    s.n = doc.at("n").get<Index>();
    s.p = doc.at("p").get<Index>();
    s.m = doc.at("m").get<Index>();
    s.delta0 = doc.at("delta0").get<double>();
    s.rho = doc.value("rho", s.rho);
    s.beta_range = doc.value("beta_range", s.beta_range);
    s.reps = doc.value("reps", s.reps);
    s.boot_draws = doc.value("boot_draws", s.boot_draws);
    s.alpha = doc.value("alpha", s.alpha);
    s.seed = doc.value("seed", s.seed);
    s.max_attempts = doc.value("max_attempts", s.max_attempts);
    s.fixed_design = doc.value("fixed_design", s.fixed_design);
    s.threads = doc.value("threads", s.threads);
    const std::string mode = doc.value("mode", std::string("modified"));
    if (mode == "modified") s.mode = BootstrapMode::Modified;
    else if (mode == "naive") s.mode = BootstrapMode::Naive;
    else throw Error(ErrorKind::Parse, "scenario: unknown mode '" + mode + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("scenario: ") + e.what());
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  return s;
}

nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  return {{"n", s.n},
          {"p", s.p},
          {"m", s.m},
          {"delta0", s.delta0},
          {"rho", s.rho},
          {"beta_range", s.beta_range},
          {"reps", s.reps},
          {"boot_draws", s.boot_draws},
          {"alpha", s.alpha},
          {"seed", s.seed},
          {"max_attempts", s.max_attempts},
          {"fixed_design", s.fixed_design},
          {"mode", s.mode == BootstrapMode::Modified ? "modified" : "naive"}};
}

void write_coverage_header(std::ostream& out) {
  out << "n,p,m,delta0,reps,boot_draws,seed,mode,corr_coverage,coef_coverage,m_correct,terminal_coverage,"
         "tail_coverage,reps_with_intervals\n";
}

void write_coverage_row(std::ostream& out, const ScenarioSpec& s, const CoverageResult& c) {
  out << std::setprecision(17) << s.n << ',' << s.p << ',' << s.m << ',' << s.delta0 << ',' << s.reps << ','
      << s.boot_draws << ',' << s.seed << ',' << (s.mode == BootstrapMode::Modified ? "modified" : "naive") << ','
      << c.corr_coverage << ',' << c.coef_coverage << ',' << c.m_correct << ',' << c.terminal_coverage << ','
      << c.tail_coverage << ',' << c.reps_with_intervals << '\n';
}

}  // namespace larinf
