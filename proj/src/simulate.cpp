#include "larinf/simulate.hpp"

#include "larinf/error.hpp"
#include "larinf/inference.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

namespace larinf {

void ScenarioSpec::validate() const {
  if (!(p >= 1 && m <= p && p < n)) {
    throw Error(ErrorKind::InvalidArgument, "scenario: need m <= p < n");
  }
  if (!(delta0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "scenario: delta0 must be positive");
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorKind::InvalidArgument, "scenario: |rho| must be < 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "scenario: alpha must lie in (0,1)");
  if (reps < 1 || boot_draws < 0 || max_attempts < 1) {
    throw Error(ErrorKind::InvalidArgument, "scenario: reps, boot_draws and max_attempts must be positive");
  }
}

Matrix ar1_covariance(Index p, double rho) {
  Matrix s(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) s(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  return s;
}

Matrix draw_design(Index n, const Matrix& sigma, Engine& rng) {
  const Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "draw_design: covariance not SPD");
  std::normal_distribution<double> z;
  Matrix g(n, sigma.rows());
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < g.cols(); ++j) g(i, j) = z(rng);
  return g * llt.matrixU();  // rows ~ N(0, L L^T)
}

Scenario generate_scenario(const ScenarioSpec& spec, Engine& rng) {
  spec.validate();
  const Matrix sigma = ar1_covariance(spec.p, spec.rho);
  std::uniform_real_distribution<double> coef(-spec.beta_range, spec.beta_range);
  std::vector<Index> idx(spec.p);
  for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    const Matrix x_n = draw_design(spec.n, sigma, rng);
    std::iota(idx.begin(), idx.end(), Index{0});
    Vector beta = Vector::Zero(spec.p);
    for (Index i = 0; i < spec.m; ++i) {
      std::uniform_int_distribution<Index> pick(i, spec.p - 1);
      std::swap(idx[i], idx[pick(rng)]);
      beta(idx[i]) = coef(rng);
    }
    const Vector mu_raw = x_n * beta;

    Scenario sc;
    try {
      // scaling then centring and renormalising equals centring then scaling
      sc.data = standardize(x_n, mu_raw, true);
      sc.population = lar_path(sc.data.x, sc.data.y, LarOptions::population());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw;
      continue;
    }
    if (sc.population.terminated_at != spec.m || sc.population.has_tie()) continue;
    sc.margin = margins(sc.population);
    if (!(sc.margin.delta >= spec.delta0)) continue;
    sc.mu = sc.data.y;
    sc.mu_n = sc.data.response_scale * sc.mu;
    sc.beta = beta;
    sc.attempts = attempt;
    return sc;
  }
  throw Error(ErrorKind::RejectionBudgetExceeded,
              "generate_scenario: no acceptable draw in " + std::to_string(spec.max_attempts) + " attempts");
}

StandardizedData draw_response(const Scenario& sc, Engine& rng) {
  std::normal_distribution<double> z;
  Vector y_n(sc.mu_n.size());
  for (Index i = 0; i < y_n.size(); ++i) y_n(i) = sc.mu_n(i) + z(rng);
  y_n.array() -= y_n.mean();
  return sc.data.with_response(y_n / sc.data.response_scale);
}

namespace {

bool covers(const Interval& iv, double target) { return iv.first <= target && target <= iv.second; }

ReplicationResult replicate(const ScenarioSpec& spec, const Scenario& sc, Engine& noise, std::uint64_t boot_seed) {
  const StandardizedData data = draw_response(sc, noise);
  const LarPath path = lar_path(data, data.y);
  const InferenceReport inf = infer(data, path);
  ReplicationResult r;
  r.m_bar = inf.m_bar;
  r.m_correct = inf.m_bar == spec.m;
  if (spec.boot_draws == 0) return r;

  BootstrapConfig cfg;
  cfg.draws = spec.boot_draws;
  cfg.alpha = spec.alpha;
  cfg.seed = boot_seed;
  cfg.parallel = false;
  cfg.mode = spec.mode;
  const BootstrapBase base = make_base(data, path, inf.m_bar, spec.mode);
  const auto reps = run_replicas_serial(base, cfg);
  const auto corr = correlation_intervals(base, reps, spec.alpha);

  const LarPath& pop = sc.population;
  auto pop_corr = [&](Index k) { return k <= pop.size() ? pop.steps[k - 1].correlation : 0.0; };
  auto pop_coef = [&](Index k) { return pop.coefficients_at(std::min(k, pop.size()), data.p()); };

  if (spec.m < data.p()) {
    double hit = 0.0;
    for (Index k = spec.m + 1; k <= data.p(); ++k) hit += covers(corr[k - 1], 0.0);
    r.tail_coverage = hit / static_cast<double>(data.p() - spec.m);
    r.has_tail = true;
  }
  if (inf.m_bar == 0) return r;

  r.intervals = true;
  const auto coef = coefficient_intervals(base, reps, spec.alpha);
  double hit = 0.0;
  for (Index k = 1; k <= inf.m_bar; ++k) hit += covers(corr[k - 1], pop_corr(k));
  r.corr_coverage = hit / static_cast<double>(inf.m_bar);

  hit = 0.0;
  double cells = 0.0;
  for (Index k = 1; k <= inf.m_bar; ++k) {
    const Vector target = pop_coef(k);
    const auto cols = path.active_set(k);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      hit += covers(coef[k - 1][i], target(cols[i]));
      cells += 1.0;
    }
  }
  r.coef_coverage = hit / cells;

  const Vector b_m = pop_coef(spec.m);
  const auto cols = path.active_set(inf.m_bar);
  hit = 0.0;
  for (std::size_t i = 0; i < cols.size(); ++i) hit += covers(coef.back()[i], b_m(cols[i]));
  r.terminal_coverage = hit / static_cast<double>(cols.size());
  return r;
}

std::uint64_t boot_seed_for(std::uint64_t seed, int rep) {
  std::uint64_t s = (seed ^ 0xA0761D6478BD642FULL) + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rep);
  return splitmix64(s);
}

constexpr std::uint64_t kDesignStream = 0;
constexpr std::uint64_t kNoiseStream = 1;

}  // namespace

ReplicationResult run_replication(const ScenarioSpec& spec, int rep) {
  const auto r = static_cast<std::uint64_t>(rep);
  Engine design = spec.fixed_design ? stream(spec.seed, ~0ULL) : stream(spec.seed, r, kDesignStream);
  const Scenario sc = generate_scenario(spec, design);
  Engine noise = stream(spec.seed, r, kNoiseStream);
  return replicate(spec, sc, noise, boot_seed_for(spec.seed, rep));
}

CoverageResult summarize(const std::vector<ReplicationResult>& results) {
  CoverageResult c;
  c.reps = static_cast<int>(results.size());
  int with_tail = 0;
  for (const ReplicationResult& r : results) {
    c.m_correct += r.m_correct;
    if (r.has_tail) {
      c.tail_coverage += r.tail_coverage;
      ++with_tail;
    }
    if (!r.intervals) continue;
    ++c.reps_with_intervals;
    c.corr_coverage += r.corr_coverage;
    c.coef_coverage += r.coef_coverage;
    c.terminal_coverage += r.terminal_coverage;
  }
  if (c.reps > 0) c.m_correct /= c.reps;
  if (with_tail > 0) c.tail_coverage /= with_tail;
  if (c.reps_with_intervals > 0) {
    c.corr_coverage /= c.reps_with_intervals;
    c.coef_coverage /= c.reps_with_intervals;
    c.terminal_coverage /= c.reps_with_intervals;
  }
  c.per_rep = results;
  return c;
}

CoverageResult run_coverage(const ScenarioSpec& spec, bool parallel, const std::function<void(int, int)>& progress) {
  spec.validate();
  std::vector<ReplicationResult> out(spec.reps);
  Scenario fixed;
  if (spec.fixed_design) {
    Engine design = stream(spec.seed, ~0ULL);
    fixed = generate_scenario(spec, design);
  }
  auto one = [&](int rep) {
    if (!spec.fixed_design) return run_replication(spec, rep);
    Engine noise = stream(spec.seed, static_cast<std::uint64_t>(rep), kNoiseStream);
    return replicate(spec, fixed, noise, boot_seed_for(spec.seed, rep));
  };
  const int batch = std::max(1, spec.reps / 20);
  const int threads = spec.threads > 0 ? spec.threads : omp_get_max_threads();
  for (int start = 0; start < spec.reps; start += batch) {
    const int stop = std::min(spec.reps, start + batch);
    if (parallel) {
      std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (int rep = start; rep < stop; ++rep) {
        try {
          out[rep] = one(rep);
        } catch (...) {
#pragma omp critical(larinf_coverage_failure)
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
    } else {
      for (int rep = start; rep < stop; ++rep) out[rep] = one(rep);
    }
    if (progress) progress(stop, spec.reps);
  }
  return summarize(out);
}

TieDemoResult tie_demo(Index n, int reps, std::uint64_t seed, bool parallel) {
  if (n <= 4 || reps < 1) throw Error(ErrorKind::InvalidArgument, "tie_demo: need n > 4 and reps >= 1");
  Engine design = stream(seed, 0);
  Matrix x = draw_design(n, ar1_covariance(4, 0.9), design);
  for (Index j = 0; j < 4; ++j) x.col(j).normalize();

  const Equiangular a3 = equiangular(x.leftCols(3));
  TieDemoResult out;
  out.mu = x.col(0) + a3.a;
  out.population = lar_path(x, out.mu, LarOptions::population());
  out.correlations = Matrix::Zero(reps, 4);
  out.step2_entrant.assign(reps, -1);

  const double rn = std::sqrt(static_cast<double>(n));
  auto one = [&](int r) {
    Engine noise = stream(seed, static_cast<std::uint64_t>(r) + 1);
    std::normal_distribution<double> z;
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = out.mu(i) + z(noise) / rn;
    LarOptions opt;
    opt.keep_vectors = false;
    const LarPath path = lar_path(x, y, opt);
    for (Index k = 0; k < std::min<Index>(4, path.size()); ++k) out.correlations(r, k) = path.steps[k].correlation;
    if (path.size() >= 2) out.step2_entrant[r] = path.steps[1].entrant;
  };
  if (parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (int r = 0; r < reps; ++r) {
      try {
        one(r);
      } catch (...) {
#pragma omp critical(larinf_tie_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (int r = 0; r < reps; ++r) one(r);
  }
  return out;
}

AsymptoticCoefCov asymptotic_coef_cov(const Matrix& R, const std::vector<Index>& order,
                                      const std::vector<int>& signs, double sigma) {
  const Index m = static_cast<Index>(order.size());
  if (m < 1 || signs.size() != order.size()) {
    throw Error(ErrorKind::DimensionMismatch, "asymptotic_coef_cov: order and signs must be non-empty and equal");
  }
  if (R.rows() != R.cols()) throw Error(ErrorKind::DimensionMismatch, "asymptotic_coef_cov: R must be square");
  AsymptoticCoefCov out;
  out.R = R;
  out.order = order;
  out.signs = signs;
  out.sigma = sigma;
  out.lambda = Vector::Zero(m);

  auto prefix = [&](Index k) { return std::vector<Index>(order.begin(), order.begin() + k); };
  auto sub = [&](const std::vector<Index>& r, const std::vector<Index>& c) {
    Matrix s(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) s(i, j) = R(r[i], c[j]);
    return s;
  };
  auto sign_vec = [&](Index k) {
    Vector s(k);
    for (Index i = 0; i < k; ++i) s(i) = signs[i];
    return s;
  };

  std::vector<Matrix> inv(m);
  for (Index k = 1; k <= m; ++k) {
    const Matrix raa = sub(prefix(k), prefix(k));
    const Eigen::LLT<Matrix> llt(raa);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "asymptotic_coef_cov: R_AA");
    inv[k - 1] = llt.solve(Matrix::Identity(k, k));
  }

  // r_k = R_{A,j} - R_{A,A_k} R_{A_k}^{-1} R_{A_k,j} for j = j_{k+1}, on any index set A
  auto partial = [&](Index k, const std::vector<Index>& rows) {
    const std::vector<Index> ak = prefix(k);
    const std::vector<Index> j{order[k]};
    return Vector(sub(rows, j) - sub(rows, ak) * inv[k - 1] * sub(ak, j));
  };

  for (Index k = 1; k < m; ++k) {
    const Vector s = sign_vec(k);
    const std::vector<Index> j{order[k]};
    const double lean = (sub(j, prefix(k)) * inv[k - 1] * s)(0);
    out.lambda(k - 1) = signs[k] / (1.0 - signs[k] * lean);
  }

  const double s2 = sigma * sigma;
  out.cov.assign(m, {});
  for (Index k = 1; k <= m; ++k) {
    const Vector s = sign_vec(k);
    const std::vector<Index> ak = prefix(k);
    Matrix mid = sub(ak, ak);
    if (k < m) mid += out.lambda(k - 1) * out.lambda(k - 1) * partial(k, {order[k]})(0) * s * s.transpose();
    out.cov[k - 1].push_back(s2 * inv[k - 1] * mid * inv[k - 1]);
    for (Index kp = k + 1; kp <= m; ++kp) {
      const std::vector<Index> akp = prefix(kp);
      const Matrix bracket = sub(ak, akp) - out.lambda(k - 1) * s * partial(k, akp).transpose();
      out.cov[k - 1].push_back(s2 * inv[k - 1] * bracket * inv[kp - 1]);
    }
  }

  const Index dim = m * (m + 1) / 2;
  out.assembled = Matrix::Zero(dim, dim);
  auto offset = [](Index k) { return k * (k - 1) / 2; };
  for (Index k = 1; k <= m; ++k) {
    for (Index kp = k; kp <= m; ++kp) {
      const Matrix& b = out.cov[k - 1][kp - k];
      out.assembled.block(offset(k), offset(kp), k, kp) = b;
      out.assembled.block(offset(kp), offset(k), kp, k) = b.transpose();
    }
  }
  return out;
}

bool is_psd(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale) return false;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

}  // namespace larinf
