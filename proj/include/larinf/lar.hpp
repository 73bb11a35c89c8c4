#pragma once

#include "larinf/linalg.hpp"

#include <limits>
#include <string>
#include <vector>

namespace larinf {

// Design with unit-norm columns and a response scaled by 1/sqrt(n), plus what
// is needed to map coefficients back to raw units.
struct StandardizedData {
  Matrix x;              // n x p, unit-norm columns
  Vector y;              // response / sqrt(n)
  Vector column_scales;  // norms of the (centered) raw columns
  Vector column_means;   // zero when not centered
  double response_mean = 0.0;
  double response_scale = 1.0;  // sqrt(n)
  bool centered = false;
  std::vector<std::string> names;

  Index n() const noexcept { return x.rows(); }
  Index p() const noexcept { return x.cols(); }

  // The response on the raw scale (centered when `centered`), i.e. sqrt(n) * y.
  Vector raw_response() const { return response_scale * y; }

  // Coefficients of the standardized design expressed against raw columns.
  Vector raw_coefficients(const Vector& b) const;

  StandardizedData with_response(Vector response) const;
};

// Requires n > p >= 1. Throws ZeroColumn / DegenerateResponse / InvalidArgument.
StandardizedData standardize(const Matrix& x_raw, const Vector& y_raw, bool center,
                             std::vector<std::string> names = {});

enum class PathKind { Sample, Population };

struct LarOptions {
  PathKind kind = PathKind::Sample;
  // Stop once C_k <= zero_tol * C_1.
  double zero_tol = 0.0;
  // Candidates whose weights are within tie_tol * (1 + |gamma|) of the minimum
  // are reported as tied; the lowest column index enters.
  double tie_tol = 1e-9;
  // |(c)_j - (C/A)(w)_j| at or below this (scaled by max(1, C/A)) selects the
  // r_{k,j} = 0 branch of the weight formula.
  double degenerate_tol = 1e-12;
  // Retain the n-vectors a_k and e_k on the path.
  bool keep_vectors = true;

  static LarOptions sample() { return {}; }
  static LarOptions population() {
    LarOptions o;
    o.kind = PathKind::Population;
    o.zero_tol = 1e-10;
    return o;
  }
};

struct LarStep {
  Index entrant = -1;
  int sign = 0;
  double correlation = 0.0;   // C_k
  double angle = 1.0;         // A_k
  double inv_angle_sq = 1.0;  // A_k^{-2}
  double weight = 0.0;        // gamma_k
  double innovation_sq = 0.0; // e_k^T e_k
  double scale_u = 0.0;       // u_k
  Vector correlations;        // c_k = X^T (response - fit_{k-1})
  Vector equiangular_dots;    // w_k = X^T a_k
  Vector candidate_weights;   // gamma_{k,j}; NaN on the active set

  // A_k^{-2} - A_{k-1}^{-2}
  double angle_increment(const LarStep* previous) const {
    return inv_angle_sq - (previous ? previous->inv_angle_sq : 0.0);
  }
};

struct TieDiagnostic {
  Index step = 0;  // 1-based step on which the tied candidates would enter
  std::vector<Index> candidates;
  Index chosen = -1;
};

struct LarPath {
  PathKind kind = PathKind::Sample;
  std::vector<LarStep> steps;
  std::vector<Vector> coefficients;  // b_k, k = 1..K (p entries each)
  std::vector<Vector> directions;    // a_k (only with keep_vectors)
  std::vector<Vector> innovations;   // e_k (only with keep_vectors)
  Index terminated_at = 0;           // number of steps taken
  double final_correlation = 0.0;    // C_{K+1}
  std::vector<TieDiagnostic> ties;

  bool has_tie() const noexcept { return !ties.empty(); }
  Index size() const noexcept { return static_cast<Index>(steps.size()); }
  // Entrants of steps 1..k.
  std::vector<Index> active_set(Index k) const;
  std::vector<int> signs(Index k) const;
  // b_k for 0 <= k <= K (b_0 = 0).
  Vector coefficients_at(Index k, Index p) const;
};

LarPath lar_path(const Matrix& x, const Vector& response, const LarOptions& options = {});
inline LarPath lar_path(const StandardizedData& data, const Vector& response,
                        const LarOptions& options = {}) {
  return lar_path(data.x, response, options);
}

// ---- step-level formulas, exposed for cross-checking ----------------------

struct GammaInputs {
  Vector c;  // c_k
  Vector w;  // w_k
  double correlation = 0.0;  // C_k
  double angle = 1.0;        // A_k
  std::vector<bool> active;  // membership in A_k
};

// Rebuilds the inputs of the weight computation at 1-based step k of a path.
GammaInputs gamma_inputs(const LarPath& path, Index k);

struct GammaResult {
  double gamma = 0.0;
  Vector per_index;  // gamma_{k,j}; NaN on the active set
  Eigen::VectorXi r; // r_{k,j}; 0 on the active set and in the degenerate branch
};

GammaResult gamma_lemma1(const GammaInputs& in, double degenerate_tol = 1e-12);

// min+ over the two classical candidate fractions. Throws NoPositiveCandidate
// if no fraction is positive.
double gamma_efron(const GammaInputs& in);

struct Equiangular {
  Vector a;
  double angle = 1.0;
  double scale_u = 1.0;  // u_k (recursive form only)
};

// Direct form from the signed active columns.
Equiangular equiangular(const Matrix& signed_columns);

// Recursive update from (a_{k-1}, A_{k-1}) given the entrant column, its
// innovation and sign. prev_angle = +infinity encodes the first step.
Equiangular equiangular_recursive(const Vector& prev_a, double prev_angle, const Vector& x_entrant,
                                  const Vector& innovation, int sign);

// State after k steps built from scratch from the entry order and signs.
struct PrefixState {
  linalg::ProjectionBasis basis;  // P_k
  Vector direction;               // a_k (zero when k = 0)
  double angle = std::numeric_limits<double>::infinity();  // A_k (inf when k = 0)
  std::vector<bool> active;
};

PrefixState prefix_state(const Matrix& x, const std::vector<Index>& entrants,
                         const std::vector<int>& signs, Index k);

struct EntranceCriteria {
  Vector criteria;      // C_{k,j}; NaN on A_{k-1}
  Vector penalized_sq;  // SS_{k,j} / (A_{j,k}^{-2} - A_{k-1}^{-2}); NaN on A_{k-1}
  Index argmax = -1;
  double max = 0.0;
};

// Entrance criteria for step k given the state after step k-1.
EntranceCriteria entrance_criteria(const Matrix& x, const Vector& response,
                                   const PrefixState& previous);

struct ClosedFormCorrelation {
  double correlation = 0.0;
  // || C_k (a_k/A_k - a_{k-1}/A_{k-1}) - P_{e_k} mu ||
  double projection_residual = 0.0;
};

// C_k = s_k e_k^T mu / (1 - s_k x_{j_k}^T a_{k-1} / A_{k-1}) for 1-based step k.
ClosedFormCorrelation population_correlation_closed_form(const Matrix& x, const LarPath& path,
                                                         const Vector& mu, Index k);

struct MarginReport {
  double delta_m1 = std::numeric_limits<double>::infinity();
  double delta_m2 = std::numeric_limits<double>::infinity();
  double delta = std::numeric_limits<double>::infinity();
  bool vacuous = true;
};

// Largest delta for which the population path satisfies both margin
// conditions. Throws NotPrototypical if the path carries a tie.
MarginReport margins(const LarPath& population_path);

}  // namespace larinf
