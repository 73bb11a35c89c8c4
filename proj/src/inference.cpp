#include "larinf/inference.hpp"

#include "larinf/error.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace larinf {

double sigma_hat(const StandardizedData& data, const Vector& y_n) {
  const Index n = data.n();
  const Index p = data.p();
  if (y_n.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "sigma_hat: response length " + std::to_string(y_n.size()));
  }
  if (n <= p) throw Error(ErrorKind::InvalidArgument, "sigma_hat: need n > p");
  const linalg::ProjectionBasis full = linalg::basis_of(data.x);
  const double rss = full.residual(y_n).squaredNorm();
  return std::sqrt(rss / static_cast<double>(n - p));
}

double chi2_upper_quantile(int df, double tail) {
  if (!(tail > 0.0 && tail < 1.0)) {
    throw Error(ErrorKind::InvalidTail, "chi2_upper_quantile: tail " + std::to_string(tail) + " not in (0,1)");
  }
  if (df < 1) throw Error(ErrorKind::InvalidArgument, "chi2_upper_quantile: df must be >= 1");
  const double a = 0.5 * df;
  auto upper = [a](double q) { return boost::math::gamma_q(a, 0.5 * q); };

  // Wilson-Hilferty starting point, then widen until the root is bracketed.
  const double z = boost::math::quantile(boost::math::complement(boost::math::normal(), tail));
  const double h = 2.0 / (9.0 * df);
  const double wh = df * std::pow(std::max(1.0 - h + z * std::sqrt(h), 0.05), 3);
  double lo = 0.5 * wh;
  double hi = 2.0 * wh + 1.0;
  while (lo > 1e-300 && upper(lo) < tail) lo *= 0.5;
  while (upper(hi) > tail) hi *= 2.0;

  auto f = [&](double q) { return upper(q) - tail; };
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (root.first + root.second);
}

Vector chi2_thresholds(Index p, Index n) {
  Vector t(p);
  const double tail = 1.0 / static_cast<double>(n);
  for (Index k = 1; k <= p; ++k) t(k - 1) = chi2_upper_quantile(static_cast<int>(p - k + 1), tail);
  return t;
}

TailSums tail_sums(const LarPath& path, double sigma, Index n) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "tail_sums: sigma must be positive");
  const Index K = path.size();
  TailSums out;
  out.W = Vector::Zero(K);
  out.S = Vector::Zero(K);
  const double nn = static_cast<double>(n);
  for (Index k = 0; k < K; ++k) {
    const LarStep& s = path.steps[k];
    const double inc = s.angle_increment(k > 0 ? &path.steps[k - 1] : nullptr);
    out.W(k) = nn * inc * s.correlation * s.correlation / (sigma * sigma);
  }
  double acc = 0.0;
  for (Index k = K - 1; k >= 0; --k) {
    acc += out.W(k);
    out.S(k) = acc;
  }
  return out;
}

Index estimate_m(const Vector& S, const Vector& thresholds) {
  if (S.size() != thresholds.size()) {
    throw Error(ErrorKind::DimensionMismatch, "estimate_m: S and thresholds differ in length");
  }
  Index m = 0;
  while (m < S.size() && S(m) > thresholds(m)) ++m;
  return m;
}

Vector studentized_T(const LarPath& path, const Vector& centers, double sigma, Index n) {
  const Index K = path.size();
  Vector t = Vector::Zero(K);
  const double rn = std::sqrt(static_cast<double>(n));
  for (Index k = 0; k < K; ++k) {
    const LarStep& s = path.steps[k];
    const double inc = s.angle_increment(k > 0 ? &path.steps[k - 1] : nullptr);
    const double center = k < centers.size() ? centers(k) : 0.0;
    t(k) = s.sign * std::sqrt(inc) * rn * (s.correlation - center) / sigma;
  }
  return t;
}

Vector thresholded_centers(const LarPath& path, Index m_bar) {
  Vector c = Vector::Zero(path.size());
  for (Index k = 0; k < std::min(m_bar, path.size()); ++k) c(k) = path.steps[k].correlation;
  return c;
}

InferenceReport infer(const StandardizedData& data, const LarPath& path, const Vector& centers) {
  InferenceReport r;
  r.sigma_hat = sigma_hat(data);
  const TailSums ts = tail_sums(path, r.sigma_hat, data.n());
  r.W = ts.W;
  r.S = ts.S;
  r.thresholds = chi2_thresholds(path.size(), data.n());
  r.m_bar = estimate_m(r.S, r.thresholds);
  r.T_hat = studentized_T(path, centers, r.sigma_hat, data.n());
  return r;
}

InferenceReport infer(const StandardizedData& data, const LarPath& path) {
  InferenceReport r = infer(data, path, Vector::Zero(path.size()));
  r.T_hat = studentized_T(path, thresholded_centers(path, r.m_bar), r.sigma_hat, data.n());
  return r;
}

}  // namespace larinf
