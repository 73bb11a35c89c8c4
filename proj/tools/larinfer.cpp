#include "larinf/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace larinf::cli;
  CLI::App app{"LAR path inference: sample paths, termination estimates and bootstrap intervals"};
  app.require_subcommand(1);

  FitConfig fit;
  auto* fit_cmd = app.add_subcommand("fit", "Compute the sample LAR path of a CSV data set");
  fit_cmd->add_option("csv", fit.input, "Input CSV with a header row")->required();
  fit_cmd->add_option("--response", fit.response, "Response column name or 1-based number")->required();
  fit_cmd->add_flag("!--no-center", fit.center, "Do not centre the columns and the response");
  fit_cmd->add_option("--out", fit.out, "Output file")->required();
  fit_cmd->add_option("--format", fit.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  InferConfig inf;
  auto* inf_cmd = app.add_subcommand("infer", "Estimate m_bar and bootstrap intervals along the path");
  inf_cmd->add_option("csv", inf.input, "Input CSV with a header row")->required();
  inf_cmd->add_option("--response", inf.response, "Response column name or 1-based number")->required();
  inf_cmd->add_flag("!--no-center", inf.center, "Do not centre the columns and the response");
  inf_cmd->add_option("--alpha", inf.alpha, "Interval level is 1 - alpha");
  inf_cmd->add_option("--draws", inf.draws, "Bootstrap draws (>= 100)");
  inf_cmd->add_option("--seed", inf.seed, "Seed for the bootstrap streams");
  inf_cmd->add_option("--threads", inf.threads, "Worker threads (0: all available, 1: serial)");
  inf_cmd->add_option("--out", inf.out, "Output file")->required();
  inf_cmd->add_option("--format", inf.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  SimulateConfig sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a coverage study described by a scenario file");
  sim_cmd->add_option("scenario", sim.scenario, "Scenario JSON")->required();
  sim_cmd->add_option("--out", sim.out, "Results CSV (a row is appended)")->required();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0: all available, 1: serial)");

  TieDemoConfig tie;
  auto* tie_cmd = app.add_subcommand("tie-demo", "Sample step correlations around a population mid-path tie");
  tie_cmd->add_option("--n", tie.n, "Rows of the design");
  tie_cmd->add_option("--reps", tie.reps, "Noisy responses to draw");
  tie_cmd->add_option("--seed", tie.seed, "Seed");
  tie_cmd->add_option("--threads", tie.threads, "Worker threads (0: all available, 1: serial)");
  tie_cmd->add_option("--out", tie.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }

  if (*fit_cmd) return cmd_fit(fit, std::cerr, std::cerr);
  if (*inf_cmd) return cmd_infer(inf, std::cerr, std::cerr);
  if (*sim_cmd) return cmd_simulate(sim, std::cerr, std::cerr);
  return cmd_tie_demo(tie, std::cerr, std::cerr);
}
