#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace larinf::cli {

enum ExitCode : int { kOk = 0, kParse = 2, kNumeric = 3, kBudget = 4 };

struct FitConfig {
  std::string input;
  std::string response;
  bool center = true;
  std::string out;
  std::string format = "json";
};

struct InferConfig {
  std::string input;
  std::string response;
  bool center = true;
  double alpha = 0.05;
  int draws = 500;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string format = "json";
};

struct SimulateConfig {
  std::string scenario;
  std::string out;
  int threads = -1;  // -1: take the scenario file's value
};

struct TieDemoConfig {
  long n = 500;
  int reps = 2000;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

// Each command reports failures on `err` and returns the process exit code.
int cmd_fit(const FitConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_infer(const InferConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_simulate(const SimulateConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_tie_demo(const TieDemoConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace larinf::cli
