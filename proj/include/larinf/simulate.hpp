#pragma once

#include "larinf/bootstrap.hpp"
#include "larinf/lar.hpp"
#include "larinf/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace larinf {

struct ScenarioSpec {
  Index n = 1000;
  Index p = 20;
  Index m = 3;
  double delta0 = 0.2;
  double rho = 0.5;
  double beta_range = 2.0;
  int reps = 200;
  int boot_draws = 200;  // 0 skips the bootstrap (m_bar only)
  double alpha = 0.05;
  std::uint64_t seed = 1;
  int max_attempts = 10000;
  // Keep one accepted design for every replication instead of drawing afresh.
  bool fixed_design = false;
  BootstrapMode mode = BootstrapMode::Modified;
  int threads = 0;

  void validate() const;
};

struct Scenario {
  StandardizedData data;  // y holds mu until a response is drawn
  Vector mu;              // standardized, centred population response
  Vector mu_n;            // sqrt(n) mu
  Vector beta;
  LarPath population;
  MarginReport margin;
  int attempts = 0;
};

// AR(1) covariance rho^{|i-j|}.
Matrix ar1_covariance(Index p, double rho);

// n rows of N(0, sigma) through the Cholesky factor.
Matrix draw_design(Index n, const Matrix& sigma, Engine& rng);

Scenario generate_scenario(const ScenarioSpec& spec, Engine& rng);

// Centred y_n = mu_n + eps, rescaled by 1/sqrt(n).
StandardizedData draw_response(const Scenario& sc, Engine& rng);

struct ReplicationResult {
  Index m_bar = 0;
  bool m_correct = false;
  bool intervals = false;       // false when m_bar = 0 or the bootstrap was skipped
  double corr_coverage = 0.0;   // mean over k <= m_bar
  double coef_coverage = 0.0;   // mean over the triangular set
  double terminal_coverage = 0.0;
  double tail_coverage = 0.0;   // mean over m < k <= p of 1(0 in I_k); needs the bootstrap
  bool has_tail = false;
};

ReplicationResult run_replication(const ScenarioSpec& spec, int rep);

struct CoverageResult {
  int reps = 0;
  int reps_with_intervals = 0;
  double corr_coverage = 0.0;
  double coef_coverage = 0.0;
  double m_correct = 0.0;
  double terminal_coverage = 0.0;
  double tail_coverage = 0.0;
  std::vector<ReplicationResult> per_rep;
};

CoverageResult summarize(const std::vector<ReplicationResult>& results);

// progress(done, total) is called from the calling thread between batches.
CoverageResult run_coverage(const ScenarioSpec& spec, bool parallel = true,
                            const std::function<void(int, int)>& progress = {});

struct TieDemoResult {
  LarPath population;
  Matrix correlations;             // reps x 4: C_hat_1..C_hat_4
  std::vector<Index> step2_entrant;
  Vector mu;
};

TieDemoResult tie_demo(Index n, int reps, std::uint64_t seed, bool parallel = true);

struct AsymptoticCoefCov {
  Matrix R;
  std::vector<Index> order;
  std::vector<int> signs;
  double sigma = 1.0;
  Vector lambda;                        // lambda_k, lambda_m = 0
  std::vector<std::vector<Matrix>> cov;  // cov[k][k'] for k <= k' (0-based blocks)
  Matrix assembled;                     // m(m+1)/2 square

  const Matrix& block(Index k, Index kp) const { return cov[k][kp - k]; }
};

AsymptoticCoefCov asymptotic_coef_cov(const Matrix& R, const std::vector<Index>& order,
                                      const std::vector<int>& signs, double sigma);

bool is_psd(const Matrix& m, double tol = 1e-8);

}  // namespace larinf
