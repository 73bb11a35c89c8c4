#include "larinf/bootstrap.hpp"

#include "larinf/error.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

namespace larinf {

Vector projection_coefficients(const Matrix& x, const Vector& response, const std::vector<Index>& cols) {
  Vector b = Vector::Zero(x.cols());
  if (cols.empty()) return b;
  const Matrix xa = linalg::select_columns(x, cols);
  const Vector coef = linalg::solve_spd(xa.transpose() * xa, xa.transpose() * response);
  for (std::size_t i = 0; i < cols.size(); ++i) b(cols[i]) = coef(static_cast<Index>(i));
  return b;
}

TerminalCoefficients terminal_coefficients(const StandardizedData& data, const LarPath& path, Index m_bar) {
  TerminalCoefficients t;
  t.b_bar = projection_coefficients(data.x, data.y, path.active_set(m_bar));
  t.raw_scale = data.raw_coefficients(t.b_bar);
  return t;
}

Vector residual_pool(const StandardizedData& data, const Vector& y) {
  const double n = static_cast<double>(data.n());
  const double p = static_cast<double>(data.p());
  const Vector resid = linalg::basis_of(data.x).residual(y);
  Vector pool = resid.array() - resid.mean();
  return pool / std::sqrt(n / (n - p));
}

Vector bootstrap_errors(const Vector& pool, Engine& rng) {
  const Index n = pool.size();
  std::uniform_int_distribution<Index> pick(0, n - 1);
  Vector e(n);
  for (Index i = 0; i < n; ++i) e(i) = pool(pick(rng));
  return e;
}

BootstrapBase make_base(const StandardizedData& data, const LarPath& path, Index m_bar, BootstrapMode mode) {
  BootstrapBase base;
  base.data = &data;
  base.path = &path;
  base.m_bar = m_bar;
  base.mode = mode;
  base.sigma_hat = sigma_hat(data);
  base.pool = residual_pool(data, data.y);
  if (mode == BootstrapMode::Modified) {
    const auto active = path.active_set(m_bar);
    base.mu_bar = active.empty() ? Vector::Zero(data.n())
                                 : Vector(data.x * projection_coefficients(data.x, data.y, active));
    base.centers = thresholded_centers(path, m_bar);
  } else {
    base.mu_bar = linalg::basis_of(data.x).project(data.y);
    base.centers = thresholded_centers(path, path.size());
  }
  for (Index k = 1; k <= m_bar; ++k) {
    base.b_hat.push_back(k == m_bar ? projection_coefficients(data.x, data.y, path.active_set(k))
                                    : path.coefficients_at(k, data.p()));
  }
  return base;
}

ReplicaDraw bootstrap_path_draw(const BootstrapBase& base, const Vector& errors) {
  const StandardizedData& data = *base.data;
  const Vector y_star = base.mu_bar + errors;
  LarOptions opt = LarOptions::sample();
  opt.keep_vectors = false;
  ReplicaDraw d;
  d.response = y_star;
  d.path = lar_path(data.x, y_star, opt);
  d.sigma_hat = sigma_hat(data, data.response_scale * y_star);
  return d;
}

ReplicaDraw bootstrap_path_draw(const BootstrapBase& base, Engine& rng) {
  return bootstrap_path_draw(base, bootstrap_errors(base.pool, rng));
}

ReplicaStats replica_stats(const BootstrapBase& base, const ReplicaDraw& draw) {
  const StandardizedData& data = *base.data;
  const Index p = data.p();
  const Index n = data.n();
  const double rn = std::sqrt(static_cast<double>(n));
  ReplicaStats st;
  st.sigma_hat = draw.sigma_hat;
  st.T = Vector::Zero(p);
  const Vector t = studentized_T(draw.path, base.centers, draw.sigma_hat, n);
  st.T.head(std::min(p, t.size())) = t.head(std::min(p, t.size()));

  st.entry_step.assign(p, p + 1);
  for (Index k = 0; k < draw.path.size(); ++k) st.entry_step[draw.path.steps[k].entrant] = k + 1;

  for (Index k = 1; k <= base.m_bar; ++k) {
    // the terminal step uses the projection onto the replica's own first m_bar entrants
    const Vector b_star = k == base.m_bar ? projection_coefficients(data.x, draw.response, draw.path.active_set(k))
                                          : draw.path.coefficients_at(k, p);
    const auto cols = base.path->active_set(k);
    Vector cell(static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      cell(static_cast<Index>(i)) = rn * (b_star(cols[i]) - base.b_hat[k - 1](cols[i])) / draw.sigma_hat;
    }
    st.B.push_back(std::move(cell));
  }
  return st;
}

ReplicaStats run_replica(const BootstrapBase& base, std::uint64_t seed, int b) {
  Engine rng = stream(seed, static_cast<std::uint64_t>(b));
  return replica_stats(base, bootstrap_path_draw(base, rng));
}

std::vector<ReplicaStats> run_replicas_serial(const BootstrapBase& base, const BootstrapConfig& cfg) {
  std::vector<ReplicaStats> out(cfg.draws);
  for (int b = 0; b < cfg.draws; ++b) out[b] = run_replica(base, cfg.seed, b);
  return out;
}

std::vector<ReplicaStats> run_replicas_parallel(const BootstrapBase& base, const BootstrapConfig& cfg) {
  std::vector<ReplicaStats> out(cfg.draws);
  std::exception_ptr failure;
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int b = 0; b < cfg.draws; ++b) {
    try {
      out[b] = run_replica(base, cfg.seed, b);
    } catch (...) {
#pragma omp critical(larinf_bootstrap_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<ReplicaStats> run_replicas(const BootstrapBase& base, const BootstrapConfig& cfg) {
  return cfg.parallel ? run_replicas_parallel(base, cfg) : run_replicas_serial(base, cfg);
}

int nearest_rank(int count, double q) {
  const int r = static_cast<int>(std::ceil(q * count - 1e-9));
  return std::clamp(r, 1, count);
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "quantile of an empty sample");
  const int r = nearest_rank(static_cast<int>(values.size()), q);
  std::nth_element(values.begin(), values.begin() + (r - 1), values.end());
  return values[r - 1];
}

Interval correlation_interval(const LarStep& step, const LarStep* previous, double sigma, Index n,
                              double t_lo, double t_hi) {
  const double inc = step.angle_increment(previous);
  const double q = step.sign * sigma / (std::sqrt(inc) * std::sqrt(static_cast<double>(n)));
  double lo, hi;
  if (step.sign > 0) {
    lo = step.correlation - t_hi * q;
    hi = step.correlation - t_lo * q;
  } else {
    lo = step.correlation - t_lo * q;
    hi = step.correlation - t_hi * q;
  }
  lo = std::max(lo, 0.0);
  hi = std::max(hi, lo);
  return {lo, hi};
}

Interval coefficient_interval(double b, double sigma, Index n, double b_lo, double b_hi) {
  const double scale = sigma / std::sqrt(static_cast<double>(n));
  return {b - b_hi * scale, b - b_lo * scale};
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  }
}

}  // namespace

std::vector<Interval> correlation_intervals(const BootstrapBase& base, const std::vector<ReplicaStats>& reps,
                                            double alpha) {
  check_alpha(alpha);
  const LarPath& path = *base.path;
  const Index n = base.data->n();
  std::vector<Interval> out;
  std::vector<double> t(reps.size());
  for (Index k = 0; k < path.size(); ++k) {
    for (std::size_t b = 0; b < reps.size(); ++b) t[b] = reps[b].T(k);
    const double lo = nearest_rank_quantile(t, alpha / 2);
    const double hi = nearest_rank_quantile(t, 1 - alpha / 2);
    out.push_back(correlation_interval(path.steps[k], k > 0 ? &path.steps[k - 1] : nullptr, base.sigma_hat, n,
                                       lo, hi));
  }
  return out;
}

std::vector<std::vector<Interval>> coefficient_intervals(const BootstrapBase& base,
                                                         const std::vector<ReplicaStats>& reps, double alpha) {
  check_alpha(alpha);
  const Index n = base.data->n();
  std::vector<std::vector<Interval>> out;
  std::vector<double> v(reps.size());
  for (Index k = 1; k <= base.m_bar; ++k) {
    const auto cols = base.path->active_set(k);
    std::vector<Interval> row;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      for (std::size_t b = 0; b < reps.size(); ++b) v[b] = reps[b].B[k - 1](static_cast<Index>(i));
      const double lo = nearest_rank_quantile(v, alpha / 2);
      const double hi = nearest_rank_quantile(v, 1 - alpha / 2);
      row.push_back(coefficient_interval(base.b_hat[k - 1](cols[i]), base.sigma_hat, n, lo, hi));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Matrix membership_curves(const std::vector<ReplicaStats>& reps, Index p) {
  if (reps.empty()) throw Error(ErrorKind::InvalidArgument, "membership_curves: no replicas");
  Matrix freq = Matrix::Zero(p, p);
  for (const ReplicaStats& r : reps) {
    for (Index j = 0; j < p; ++j) {
      for (Index k = r.entry_step[j]; k <= p; ++k) freq(j, k - 1) += 1.0;
    }
  }
  return freq / static_cast<double>(reps.size());
}

BootstrapSummary bootstrap(const StandardizedData& data, const LarPath& path, Index m_bar,
                           const BootstrapConfig& cfg) {
  check_alpha(cfg.alpha);
  if (cfg.draws < 1) throw Error(ErrorKind::InvalidArgument, "bootstrap: draws must be positive");
  const BootstrapBase base = make_base(data, path, m_bar, cfg.mode);
  const std::vector<ReplicaStats> reps = run_replicas(base, cfg);

  BootstrapSummary s;
  s.m_bar = m_bar;
  s.sigma_hat = base.sigma_hat;
  s.draws = cfg.draws;
  s.alpha = cfg.alpha;
  std::vector<double> t(reps.size());
  for (Index k = 0; k < path.size(); ++k) {
    for (std::size_t b = 0; b < reps.size(); ++b) t[b] = reps[b].T(k);
    s.t_quantiles.emplace_back(nearest_rank_quantile(t, cfg.alpha / 2), nearest_rank_quantile(t, 1 - cfg.alpha / 2));
  }
  s.intervals.correlation = correlation_intervals(base, reps, cfg.alpha);
  s.intervals.coefficient = coefficient_intervals(base, reps, cfg.alpha);
  for (Index k = 1; k <= m_bar; ++k) s.intervals.coefficient_index.push_back(path.active_set(k));
  s.intervals.membership = membership_curves(reps, data.p());
  s.terminal = terminal_coefficients(data, path, m_bar);
  return s;
}

}  // namespace larinf
