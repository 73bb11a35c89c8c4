#pragma once

#include "larinf/inference.hpp"
#include "larinf/lar.hpp"
#include "larinf/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace larinf {

enum class BootstrapMode {
  Modified,  // resample around the projection onto the first m_bar entrants
  Naive,     // resample around the full least-squares fit, untruncated centers
};

struct BootstrapConfig {
  int draws = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool parallel = true;
  int threads = 0;  // 0: OpenMP default
  BootstrapMode mode = BootstrapMode::Modified;
};

using Interval = std::pair<double, double>;

// Least-squares coefficients of `response` on the listed columns, as a p-vector.
Vector projection_coefficients(const Matrix& x, const Vector& response, const std::vector<Index>& cols);

struct TerminalCoefficients {
  Vector b_bar;      // support on the first m_bar entrants
  Vector raw_scale;  // against the raw columns
};

TerminalCoefficients terminal_coefficients(const StandardizedData& data, const LarPath& path, Index m_bar);

// Centred residuals of the full fit divided by sqrt(n / (n - p)).
Vector residual_pool(const StandardizedData& data, const Vector& y);

// n draws with replacement from the pool.
Vector bootstrap_errors(const Vector& pool, Engine& rng);
inline Vector bootstrap_errors(const StandardizedData& data, const Vector& y, Engine& rng) {
  return bootstrap_errors(residual_pool(data, y), rng);
}

// Everything a replica needs that does not change between draws.
struct BootstrapBase {
  const StandardizedData* data = nullptr;
  const LarPath* path = nullptr;
  Index m_bar = 0;
  double sigma_hat = 0.0;
  BootstrapMode mode = BootstrapMode::Modified;
  Vector mu_bar;   // bootstrap mean
  Vector pool;     // residual pool
  Vector centers;  // C_bar_k
  std::vector<Vector> b_hat;  // b_hat_k for k <= m_bar, terminal step replaced by b_bar
};

BootstrapBase make_base(const StandardizedData& data, const LarPath& path, Index m_bar,
                        BootstrapMode mode = BootstrapMode::Modified);

struct ReplicaDraw {
  Vector response;  // y*
  LarPath path;
  double sigma_hat = 0.0;
};

// y* = mu_bar + eps*; returns Lar(X, y*) and sigma_hat* from sqrt(n) y*.
ReplicaDraw bootstrap_path_draw(const BootstrapBase& base, const Vector& errors);
ReplicaDraw bootstrap_path_draw(const BootstrapBase& base, Engine& rng);

struct ReplicaStats {
  Vector T;                         // T*_k, k = 1..p
  std::vector<Vector> B;            // B*_{k,j} over j in the sample A_k, k <= m_bar
  std::vector<Index> entry_step;    // 1-based step on which each variable entered the replica
  double sigma_hat = 0.0;
};

ReplicaStats replica_stats(const BootstrapBase& base, const ReplicaDraw& draw);

// Deterministic replica b, i.e. stream(seed, b).
ReplicaStats run_replica(const BootstrapBase& base, std::uint64_t seed, int b);

// Reference loop and its OpenMP counterpart; identical output for equal inputs.
std::vector<ReplicaStats> run_replicas_serial(const BootstrapBase& base, const BootstrapConfig& cfg);
std::vector<ReplicaStats> run_replicas_parallel(const BootstrapBase& base, const BootstrapConfig& cfg);
std::vector<ReplicaStats> run_replicas(const BootstrapBase& base, const BootstrapConfig& cfg);

// Nearest-rank empirical quantile: the ceil(q N)-th order statistic.
double nearest_rank_quantile(std::vector<double> values, double q);
int nearest_rank(int count, double q);

// Interval endpoints for C_k given studentized quantiles (lo, hi) of T*_k;
// negative lower ends are replaced by 0.
Interval correlation_interval(const LarStep& step, const LarStep* previous, double sigma, Index n,
                              double t_lo, double t_hi);

Interval coefficient_interval(double b, double sigma, Index n, double b_lo, double b_hi);

struct IntervalSet {
  std::vector<Interval> correlation;               // I_k, k = 1..p
  std::vector<std::vector<Interval>> coefficient;  // J_{k,j}, j in A_k (entry order), k <= m_bar
  std::vector<std::vector<Index>> coefficient_index;
  Matrix membership;                               // p x p: share with j active by step k
};

std::vector<Interval> correlation_intervals(const BootstrapBase& base, const std::vector<ReplicaStats>& reps,
                                            double alpha);
std::vector<std::vector<Interval>> coefficient_intervals(const BootstrapBase& base,
                                                         const std::vector<ReplicaStats>& reps, double alpha);
Matrix membership_curves(const std::vector<ReplicaStats>& reps, Index p);

struct BootstrapSummary {
  Index m_bar = 0;
  double sigma_hat = 0.0;
  int draws = 0;
  double alpha = 0.05;
  std::vector<Interval> t_quantiles;  // (lo, hi) of T*_k
  IntervalSet intervals;
  TerminalCoefficients terminal;
};

BootstrapSummary bootstrap(const StandardizedData& data, const LarPath& path, Index m_bar,
                           const BootstrapConfig& cfg);

}  // namespace larinf
