#pragma once

// Identity checks on a single LAR path, shared by the unit and acceptance
// suites. Each field is the worst violation seen; booleans are all-or-nothing.

#include "larinf/lar.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace checks {

using namespace larinf;

struct PathIdentities {
  double equal_corr_spread = 0.0;  // max over steps of spread of |c| on the active set
  double corr_recursion = 0.0;     // |C_{k+1} - (C_k - gamma_k A_k)|
  double projection = 0.0;         // |mu_{k-1} + (C_k/A_k) a_k - P_k y|
  bool angles_decreasing = true;
  double fit_vs_ols = 0.0;         // |X b_p - P_X y|
  double fit_vs_direction_sum = 0.0;  // |X b_k - sum gamma_j a_j|
  bool gamma_identical = true;     // reformulated weight == min+ form, bit for bit
  double gamma_vs_bisection = 0.0;
  bool entrance_argmax = true;
  double entrance_max = 0.0;       // |max_j C_{k,j} - C_k|
  double penalized_ss = 0.0;       // |C_{k,j}^2 - penalized SS| / max(1, C^2)
  double closed_form = 0.0;        // |closed-form C_k - C_k|
  double closed_form_projection = 0.0;
  double decomposition = 0.0;      // projection decomposition residual
  double equiangular_forms = 0.0;  // direct vs recursive
  bool textbook_order = true;
  Index steps = 0;
};

inline PathIdentities check_path(const Matrix& x, const Vector& y) {
  PathIdentities r;
  const LarPath path = lar_path(x, y);
  const Index p = x.cols();
  const Index K = path.size();
  r.steps = K;

  Vector fit = Vector::Zero(x.rows());
  for (Index k = 1; k <= K; ++k) {
    const LarStep& s = path.steps[k - 1];
    const auto active = path.active_set(k);
    const auto signs = path.signs(k);

    double lo = s.correlation, hi = s.correlation;
    for (Index j : active) {
      lo = std::min(lo, std::abs(s.correlations(j)));
      hi = std::max(hi, std::abs(s.correlations(j)));
    }
    r.equal_corr_spread = std::max(r.equal_corr_spread, hi - lo);

    const double next_c = k < K ? path.steps[k].correlation : path.final_correlation;
    r.corr_recursion = std::max(r.corr_recursion, std::abs(next_c - (s.correlation - s.weight * s.angle)));

    const Vector& a = path.directions[k - 1];
    const Vector mu_prev = x * path.coefficients_at(k - 1, p);
    const Vector pk_y =
        oracle::normal_equations_projection(linalg::select_columns(x, active), y);
    r.projection = std::max(r.projection, (mu_prev + (s.correlation / s.angle) * a - pk_y).norm());

    if (k > 1 && !(s.inv_angle_sq > path.steps[k - 2].inv_angle_sq && s.angle < path.steps[k - 2].angle)) {
      r.angles_decreasing = false;
    }

    fit += s.weight * a;
    r.fit_vs_direction_sum = std::max(r.fit_vs_direction_sum, (x * path.coefficients[k - 1] - fit).norm());

    if (static_cast<Index>(active.size()) < p) {
      const GammaInputs in = gamma_inputs(path, k);
      const GammaResult g1 = gamma_lemma1(in);
      const double ge = gamma_efron(in);
      if (g1.gamma != ge || g1.gamma != s.weight) r.gamma_identical = false;
      double bis = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < p; ++j) {
        if (!in.active[j]) bis = std::min(bis, oracle::bisection_gamma(in.c(j), in.w(j), in.correlation, in.angle));
      }
      r.gamma_vs_bisection = std::max(r.gamma_vs_bisection, std::abs(bis - g1.gamma) / (1.0 + g1.gamma));
    }

    const PrefixState prev = prefix_state(x, active, signs, k - 1);
    const EntranceCriteria ec = entrance_criteria(x, y, prev);
    if (ec.argmax != s.entrant) r.entrance_argmax = false;
    r.entrance_max = std::max(r.entrance_max, std::abs(ec.max - s.correlation));
    for (Index j = 0; j < p; ++j) {
      if (std::isnan(ec.criteria(j))) continue;
      const double c2 = ec.criteria(j) * ec.criteria(j);
      r.penalized_ss = std::max(r.penalized_ss, std::abs(c2 - ec.penalized_sq(j)) / std::max(1.0, c2));
    }

    const ClosedFormCorrelation cf = population_correlation_closed_form(x, path, y, k);
    r.closed_form = std::max(r.closed_form, std::abs(cf.correlation - s.correlation));
    r.closed_form_projection = std::max(r.closed_form_projection, cf.projection_residual);

    Vector decomp = Vector::Zero(x.rows());
    for (Index i = 0; i < k; ++i) {
      const Vector& e = path.innovations[i];
      decomp += e * (e.dot(y) / e.squaredNorm());
    }
    decomp -= (next_c / s.angle) * a;
    r.decomposition = std::max(r.decomposition, (x * path.coefficients[k - 1] - decomp).norm());

    Matrix signed_cols = linalg::select_columns(x, active);
    for (Index i = 0; i < k; ++i) signed_cols.col(i) *= signs[i];
    const Equiangular direct = equiangular(signed_cols);
    r.equiangular_forms =
        std::max({r.equiangular_forms, (direct.a - a).norm(), std::abs(direct.angle - s.angle)});
  }

  if (K == p) {
    r.fit_vs_ols = (x * path.coefficients[K - 1] - oracle::normal_equations_projection(x, y)).norm();
  } else {
    r.fit_vs_ols = std::numeric_limits<double>::infinity();
  }

  const auto tb = oracle::textbook_lar(x, y);
  if (static_cast<Index>(tb.size()) != K) r.textbook_order = false;
  for (std::size_t i = 0; i < std::min<std::size_t>(tb.size(), K); ++i) {
    if (tb[i].entrant != path.steps[i].entrant || tb[i].sign != path.steps[i].sign) r.textbook_order = false;
  }
  return r;
}


// Random test instance: n <= 200, p <= 12, mildly correlated columns.
inline std::pair<Matrix, Vector> random_instance(Engine& rng) {
  std::uniform_int_distribution<Index> pick_p(1, 12);
  const Index p = pick_p(rng);
  std::uniform_int_distribution<Index> pick_n(p + 2, 200);
  const Index n = pick_n(rng);
  std::uniform_real_distribution<double> share(0.0, 1.0);
  const Matrix x = oracle::random_unit_design(n, p, rng, share(rng));
  const Vector beta = oracle::random_vector(p, rng);
  const Vector y = x * beta + 0.5 * oracle::random_vector(n, rng) / std::sqrt(static_cast<double>(n));
  return {x, y};
}

}  // namespace checks
