#include "larinf/cli.hpp"

#include "larinf/error.hpp"
#include "larinf/io.hpp"
#include "larinf/report.hpp"

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace larinf::cli {

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
      return kParse;
    case ErrorKind::RejectionBudgetExceeded:
      return kBudget;
    default:
      return kNumeric;
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw Error(ErrorKind::Parse, path + ": cannot open for writing");
  return f;
}

StandardizedData load(const std::string& input, const std::string& response, bool center) {
  const Dataset d = split_response(read_csv(input), response);
  return standardize(d.x, d.y, center, d.names);
}

bool check_format(const std::string& f, std::ostream& err) {
  if (f == "json" || f == "csv") return true;
  err << "error: --format must be json or csv\n";
  return false;
}

}  // namespace

int cmd_fit(const FitConfig& cfg, std::ostream& log, std::ostream& err) {
  if (!check_format(cfg.format, err)) return kParse;
  return guarded(err, [&] {
    const StandardizedData data = load(cfg.input, cfg.response, cfg.center);
    const LarPath path = lar_path(data, data.y);
    auto f = open_out(cfg.out);
    if (cfg.format == "json") {
      f << dump_json(path_to_json(path, data.names)) << '\n';
    } else {
      write_path_csv(f, path, data.names);
    }
    log << "fit: " << path.size() << " steps, first entrant " << data.names[path.steps.front().entrant] << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_infer(const InferConfig& cfg, std::ostream& log, std::ostream& err) {
  if (!check_format(cfg.format, err)) return kParse;
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    err << "error: --alpha must lie in (0,1)\n";
    return kParse;
  }
  if (cfg.draws < 100) {
    err << "error: --draws must be at least 100\n";
    return kParse;
  }
  return guarded(err, [&] {
    const StandardizedData data = load(cfg.input, cfg.response, cfg.center);
    const LarPath path = lar_path(data, data.y);
    const InferenceReport inf = infer(data, path);
    BootstrapConfig bc;
    bc.draws = cfg.draws;
    bc.alpha = cfg.alpha;
    bc.seed = cfg.seed;
    bc.threads = cfg.threads;
    bc.parallel = cfg.threads != 1;
    const BootstrapSummary boot = bootstrap(data, path, inf.m_bar, bc);
    const InferredPathReport rep = build_report(data, path, inf, boot, cfg.seed);
    auto f = open_out(cfg.out);
    if (cfg.format == "json") f << dump_json(report_to_json(rep)) << '\n';
    else write_report_csv(f, rep);
    log << "infer: m_bar = " << inf.m_bar << ", sigma_hat = " << inf.sigma_hat << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_simulate(const SimulateConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(cfg.scenario);
    if (!in) throw Error(ErrorKind::Parse, cfg.scenario + ": cannot open file");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, cfg.scenario + ": " + e.what());
    }
    ScenarioSpec spec = scenario_from_json(doc);
    if (cfg.threads >= 0) spec.threads = cfg.threads;
    const bool parallel = spec.threads != 1;
    const CoverageResult res = run_coverage(spec, parallel, [&](int done, int total) {
      log << "simulate: " << done << "/" << total << " replications\n" << std::flush;
    });
    const bool fresh = !std::filesystem::exists(cfg.out) || std::filesystem::file_size(cfg.out) == 0;
    auto f = open_out(cfg.out, std::ios::app);
    if (fresh) write_coverage_header(f);
    write_coverage_row(f, spec, res);
    log << "simulate: corr " << res.corr_coverage << ", coef " << res.coef_coverage << ", m_correct "
        << res.m_correct << ", terminal " << res.terminal_coverage << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_tie_demo(const TieDemoConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    const TieDemoResult td = tie_demo(cfg.n, cfg.reps, cfg.seed, cfg.threads != 1);
    auto f = open_out(cfg.out);
    f << std::setprecision(17) << "rep,C1,C2,C3,C4,step2_entrant\n";
    int count[4] = {0, 0, 0, 0};
    for (int r = 0; r < cfg.reps; ++r) {
      f << r + 1;
      for (Index k = 0; k < 4; ++k) f << ',' << td.correlations(r, k);
      const Index e = td.step2_entrant[r];
      f << ",x" << e + 1 << '\n';
      if (e >= 0) ++count[e];
    }
    nlohmann::json pop = path_to_json(td.population, {"x1", "x2", "x3", "x4"});
    pop["tie_detected"] = td.population.has_tie();
    pop["step2_tally"] = {{"x1", count[0]}, {"x2", count[1]}, {"x3", count[2]}, {"x4", count[3]}};
    auto side = open_out(cfg.out + ".population.json");
    side << dump_json(pop) << '\n';
    log << "tie-demo: population tie " << (td.population.has_tie() ? "detected" : "not detected")
        << "; step-2 entrant x2 " << count[1] << ", x3 " << count[2] << " of " << cfg.reps << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace larinf::cli
