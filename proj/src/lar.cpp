#include "larinf/lar.hpp"

#include "larinf/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace larinf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

// ---- StandardizedData ------------------------------------------------------

Vector StandardizedData::raw_coefficients(const Vector& b) const {
  return (response_scale * b.array() / column_scales.array()).matrix();
}

StandardizedData StandardizedData::with_response(Vector response) const {
  if (response.size() != n()) {
    throw Error(ErrorKind::DimensionMismatch, "with_response: length " + std::to_string(response.size()));
  }
  StandardizedData out = *this;
  out.y = std::move(response);
  return out;
}

StandardizedData standardize(const Matrix& x_raw, const Vector& y_raw, bool center,
                             std::vector<std::string> names) {
  const Index n = x_raw.rows();
  const Index p = x_raw.cols();
  if (p < 1 || n <= p) {
    throw Error(ErrorKind::InvalidArgument,
                "standardize: need n > p >= 1 (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
  }
  if (y_raw.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "standardize: response length " + std::to_string(y_raw.size()) +
                                                  " vs " + std::to_string(n) + " rows");
  }
  if (!x_raw.allFinite() || !y_raw.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "standardize: non-finite input");
  }
  StandardizedData d;
  d.centered = center;
  d.response_scale = std::sqrt(static_cast<double>(n));
  d.x = x_raw;
  d.column_means = Vector::Zero(p);
  Vector y = y_raw;
  if (center) {
    d.column_means = x_raw.colwise().mean().transpose();
    d.x.rowwise() -= d.column_means.transpose();
    d.response_mean = y_raw.mean();
    y.array() -= d.response_mean;
    if (!(y.norm() > 1e-12 * std::max(1.0, y_raw.norm()))) {
      throw Error(ErrorKind::DegenerateResponse, "standardize: response is constant");
    }
  }
  d.column_scales = d.x.colwise().norm().transpose();
  for (Index j = 0; j < p; ++j) {
    if (!(d.column_scales(j) > 1e-12)) {
      throw Error(ErrorKind::ZeroColumn, "standardize: column " + std::to_string(j) + " has zero norm");
    }
    d.x.col(j) /= d.column_scales(j);
  }
  d.y = y / d.response_scale;
  if (names.empty()) {
    for (Index j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<Index>(names.size()) != p) {
    throw Error(ErrorKind::DimensionMismatch, "standardize: " + std::to_string(names.size()) + " names for " +
                                                  std::to_string(p) + " columns");
  }
  d.names = std::move(names);
  return d;
}

// ---- LarPath -----------------------------------------------------------------

std::vector<Index> LarPath::active_set(Index k) const {
  std::vector<Index> out;
  for (Index i = 0; i < std::min(k, size()); ++i) out.push_back(steps[i].entrant);
  return out;
}

std::vector<int> LarPath::signs(Index k) const {
  std::vector<int> out;
  for (Index i = 0; i < std::min(k, size()); ++i) out.push_back(steps[i].sign);
  return out;
}

Vector LarPath::coefficients_at(Index k, Index p) const {
  if (k <= 0 || coefficients.empty()) return Vector::Zero(p);
  return coefficients[std::min<std::size_t>(k, coefficients.size()) - 1];
}

// ---- step formulas -----------------------------------------------------------

GammaInputs gamma_inputs(const LarPath& path, Index k) {
  if (k < 1 || k > path.size()) {
    throw Error(ErrorKind::InvalidArgument, "gamma_inputs: step " + std::to_string(k) + " out of range");
  }
  const LarStep& s = path.steps[k - 1];
  GammaInputs in;
  in.c = s.correlations;
  in.w = s.equiangular_dots;
  in.correlation = s.correlation;
  in.angle = s.angle;
  in.active.assign(s.correlations.size(), false);
  for (Index j : path.active_set(k)) in.active[j] = true;
  return in;
}

GammaResult gamma_lemma1(const GammaInputs& in, double degenerate_tol) {
  const Index p = in.c.size();
  GammaResult out;
  out.per_index = Vector::Constant(p, kNaN);
  out.r = Eigen::VectorXi::Zero(p);
  const double full_step = in.correlation / in.angle;
  const double thr = degenerate_tol * std::max(1.0, full_step);
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (Index j = 0; j < p; ++j) {
    if (in.active[j]) continue;
    any = true;
    const double gap = in.c(j) - full_step * in.w(j);
    double g;
    if (std::abs(gap) <= thr) {
      g = full_step;
    } else {
      const int r = sign_of(gap);
      out.r(j) = r;
      g = (in.correlation - in.c(j) * r) / (in.angle - in.w(j) * r);
      g = std::max(g, 0.0);
    }
    out.per_index(j) = g;
    best = std::min(best, g);
  }
  out.gamma = any ? best : full_step;
  return out;
}

double gamma_efron(const GammaInputs& in) {
  const Index p = in.c.size();
  double best = std::numeric_limits<double>::infinity();
  bool any_inactive = false;
  for (Index j = 0; j < p; ++j) {
    if (in.active[j]) continue;
    any_inactive = true;
    const double f1 = (in.correlation - in.c(j)) / (in.angle - in.w(j));
    const double f2 = (in.correlation + in.c(j)) / (in.angle + in.w(j));
    if (f1 > 0.0 && std::isfinite(f1)) best = std::min(best, f1);
    if (f2 > 0.0 && std::isfinite(f2)) best = std::min(best, f2);
  }
  if (!any_inactive) return in.correlation / in.angle;
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::NoPositiveCandidate, "gamma_efron: no positive candidate fraction");
  }
  return best;
}

Equiangular equiangular(const Matrix& signed_columns) {
  const Matrix gram = signed_columns.transpose() * signed_columns;
  const Vector z = linalg::solve_spd(gram, Vector::Ones(gram.rows()));
  const double inv_sq = z.sum();
  if (!(inv_sq > 0.0)) {
    throw Error(ErrorKind::NotPositiveDefinite, "equiangular: 1^T G^{-1} 1 is not positive");
  }
  Equiangular out;
  out.angle = 1.0 / std::sqrt(inv_sq);
  out.a = out.angle * (signed_columns * z);
  return out;
}

Equiangular equiangular_recursive(const Vector& prev_a, double prev_angle, const Vector& x_entrant,
                                  const Vector& innovation, int sign) {
  const bool first = std::isinf(prev_angle);
  const double ee = innovation.squaredNorm();
  if (!(ee > 0.0)) {
    throw Error(ErrorKind::RankDeficient, "equiangular_recursive: zero innovation");
  }
  // x^T a_{k-1} / A_{k-1}, a literal 0 on the first step
  const double lean = first ? 0.0 : x_entrant.dot(prev_a) / prev_angle;
  const double u = (1.0 - sign * lean) / ee;
  if (!(u > 0.0)) {
    throw Error(ErrorKind::NonPositiveScale, "equiangular_recursive: u_k = " + std::to_string(u));
  }
  const double prev_inv_sq = first ? 0.0 : 1.0 / (prev_angle * prev_angle);
  const double inv_sq = prev_inv_sq + u * u * ee;
  Equiangular out;
  out.scale_u = u;
  out.angle = 1.0 / std::sqrt(inv_sq);
  Vector scaled = (u * sign) * innovation;
  if (!first) scaled += prev_a / prev_angle;
  out.a = out.angle * scaled;
  return out;
}

PrefixState prefix_state(const Matrix& x, const std::vector<Index>& entrants,
                         const std::vector<int>& signs, Index k) {
  PrefixState st;
  st.basis = linalg::ProjectionBasis(x.rows());
  st.direction = Vector::Zero(x.rows());
  st.active.assign(x.cols(), false);
  for (Index i = 0; i < k; ++i) {
    const Index j = entrants.at(i);
    const Vector xj = x.col(j);
    const Vector e = st.basis.append(xj, j);
    const Equiangular eq = equiangular_recursive(st.direction, st.angle, xj, e, signs.at(i));
    st.direction = eq.a;
    st.angle = eq.angle;
    st.active[j] = true;
  }
  return st;
}

EntranceCriteria entrance_criteria(const Matrix& x, const Vector& response,
                                   const PrefixState& previous) {
  const Index p = x.cols();
  const bool first = std::isinf(previous.angle);
  const Vector resid = previous.basis.residual(response);
  const double prev_inv_sq = first ? 0.0 : 1.0 / (previous.angle * previous.angle);
  EntranceCriteria out;
  out.criteria = Vector::Constant(p, kNaN);
  out.penalized_sq = Vector::Constant(p, kNaN);
  for (Index j = 0; j < p; ++j) {
    if (previous.active[j]) continue;
    const Vector xj = x.col(j);
    const double proj = xj.dot(resid);  // x_j^T (I - P_{k-1}) mu
    const int r = proj >= 0.0 ? 1 : -1;
    const double lean = first ? 0.0 : xj.dot(previous.direction) / previous.angle;
    const double crit = std::abs(proj) / (1.0 - r * lean);
    out.criteria(j) = crit;

    // sequential sum of squares over the angle change from admitting x_j
    const Vector e = previous.basis.residual(xj);
    const double ss = proj * proj / e.squaredNorm();
    const Equiangular trial = equiangular_recursive(previous.direction, previous.angle, xj, e, r);
    const double dinv = 1.0 / (trial.angle * trial.angle) - prev_inv_sq;
    out.penalized_sq(j) = ss / dinv;

    if (out.argmax < 0 || crit > out.max) {
      out.argmax = j;
      out.max = crit;
    }
  }
  return out;
}

ClosedFormCorrelation population_correlation_closed_form(const Matrix& x, const LarPath& path,
                                                         const Vector& mu, Index k) {
  if (k < 1 || k > path.size()) {
    throw Error(ErrorKind::InvalidArgument, "closed form: step " + std::to_string(k) + " out of range");
  }
  const auto entrants = path.active_set(k);
  const auto signs = path.signs(k);
  const PrefixState prev = prefix_state(x, entrants, signs, k - 1);
  const Index j = entrants[k - 1];
  const int s = signs[k - 1];
  const Vector xj = x.col(j);
  const Vector e = prev.basis.residual(xj);
  const bool first = std::isinf(prev.angle);
  const double lean = first ? 0.0 : xj.dot(prev.direction) / prev.angle;
  ClosedFormCorrelation out;
  out.correlation = s * e.dot(mu) / (1.0 - s * lean);

  const Equiangular cur = equiangular_recursive(prev.direction, prev.angle, xj, e, s);
  Vector diff = cur.a / cur.angle;
  if (!first) diff -= prev.direction / prev.angle;
  const Vector pe_mu = e * (e.dot(mu) / e.squaredNorm());
  out.projection_residual = (out.correlation * diff - pe_mu).norm();
  return out;
}

MarginReport margins(const LarPath& pop) {
  if (pop.has_tie()) {
    throw Error(ErrorKind::NotPrototypical, "margins: population path has a mid-path tie");
  }
  MarginReport out;
  const Index m = pop.terminated_at;
  for (Index k = 1; k <= m; ++k) {
    const LarStep& s = pop.steps[k - 1];
    std::vector<bool> active(s.correlations.size(), false);
    for (Index j : pop.active_set(k)) active[j] = true;
    for (Index j = 0; j < s.correlations.size(); ++j) {
      if (active[j]) continue;
      out.delta_m1 = std::min(out.delta_m1, s.correlation - std::abs(s.correlations(j)));
      out.vacuous = false;
    }
    if (k <= m - 1) {
      const Index next = pop.steps[k].entrant;
      for (Index j = 0; j < s.correlations.size(); ++j) {
        if (active[j] || j == next) continue;
        out.delta_m2 = std::min(out.delta_m2, s.angle * (s.candidate_weights(j) - s.weight));
        out.vacuous = false;
      }
    }
  }
  out.delta = std::min(out.delta_m1, out.delta_m2);
  return out;
}

// ---- the path engine -----------------------------------------------------------

LarPath lar_path(const Matrix& x, const Vector& response, const LarOptions& options) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (response.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "lar_path: response length " + std::to_string(response.size()) +
                                                  " vs " + std::to_string(n) + " rows");
  }
  LarPath path;
  path.kind = options.kind;

  const Matrix gram = x.transpose() * x;
  Vector fit = Vector::Zero(n);
  Vector b = Vector::Zero(p);
  Vector c = x.transpose() * response;

  Index first;
  const double c1 = c.cwiseAbs().maxCoeff(&first);
  path.final_correlation = c1;
  if (!(c1 > 0.0)) return path;
  const double zero_abs = options.zero_tol * c1;

  linalg::ProjectionBasis basis(n);
  Vector prev_a = Vector::Zero(n);
  double prev_angle = std::numeric_limits<double>::infinity();
  std::vector<Index> active;
  std::vector<bool> is_active(p, false);
  Index entrant = first;
  std::optional<TieDiagnostic> pending_tie;

  for (Index k = 1; k <= p; ++k) {
    const double ck = c.cwiseAbs().maxCoeff();
    if (k > 1 && ck <= zero_abs) {
      path.final_correlation = ck;
      break;
    }
    if (pending_tie) {
      path.ties.push_back(*pending_tie);
      pending_tie.reset();
    }

    LarStep step;
    step.entrant = entrant;
    step.sign = c(entrant) >= 0.0 ? 1 : -1;
    step.correlation = ck;
    step.correlations = c;
    active.push_back(entrant);
    is_active[entrant] = true;

    const Vector xj = x.col(entrant);
    const Vector e = basis.append(xj, entrant);
    const Equiangular eq = equiangular_recursive(prev_a, prev_angle, xj, e, step.sign);
    step.angle = eq.angle;
    step.inv_angle_sq = 1.0 / (eq.angle * eq.angle);
    step.scale_u = eq.scale_u;
    step.innovation_sq = e.squaredNorm();
    step.equiangular_dots = x.transpose() * eq.a;

    GammaInputs gin;
    gin.c = c;
    gin.w = step.equiangular_dots;
    gin.correlation = ck;
    gin.angle = eq.angle;
    gin.active = is_active;
    const GammaResult gr = gamma_lemma1(gin, options.degenerate_tol);
    step.weight = gr.gamma;
    step.candidate_weights = gr.per_index;

    Index next = -1;
    if (static_cast<Index>(active.size()) < p) {
      const double band = options.tie_tol * (1.0 + std::abs(gr.gamma));
      TieDiagnostic tie;
      tie.step = k + 1;
      for (Index j = 0; j < p; ++j) {
        if (is_active[j]) continue;
        if (gr.per_index(j) <= gr.gamma + band) tie.candidates.push_back(j);
      }
      next = tie.candidates.front();
      if (tie.candidates.size() > 1) {
        tie.chosen = next;
        pending_tie = tie;
      }
    }

    // advance the fit and the step coefficients
    fit += step.weight * eq.a;
    Matrix g_aa(active.size(), active.size());
    Vector w_a(active.size());
    for (std::size_t r = 0; r < active.size(); ++r) {
      w_a(r) = step.equiangular_dots(active[r]);
      for (std::size_t s = 0; s < active.size(); ++s) g_aa(r, s) = gram(active[r], active[s]);
    }
    const Vector delta = linalg::solve_spd(g_aa, w_a);
    for (std::size_t r = 0; r < active.size(); ++r) b(active[r]) += step.weight * delta(r);

    path.steps.push_back(std::move(step));
    path.coefficients.push_back(b);
    if (options.keep_vectors) {
      path.directions.push_back(eq.a);
      path.innovations.push_back(e);
    }
    path.terminated_at = k;

    prev_a = eq.a;
    prev_angle = eq.angle;
    c = x.transpose() * (response - fit);
    path.final_correlation = c.cwiseAbs().maxCoeff();
    if (next < 0) break;
    entrant = next;
  }
  return path;
}

}  // namespace larinf
