#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's solvers or path engine.

#include "larinf/linalg.hpp"
#include "larinf/rng.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using larinf::Index;
using larinf::Matrix;
using larinf::Vector;

// X (X^T X)^{-1} X^T v through a full-pivot LU of the normal equations.
inline Vector normal_equations_projection(const Matrix& x, const Vector& v) {
  const Matrix g = x.transpose() * x;
  return x * g.fullPivLu().solve(x.transpose() * v);
}

inline Vector ols_coefficients(const Matrix& x, const Vector& v) { return x.householderQr().solve(v); }

inline double ols_sigma(const Matrix& x, const Vector& y_n) {
  const Vector r = y_n - x * ols_coefficients(x, y_n);
  return std::sqrt(r.squaredNorm() / static_cast<double>(x.rows() - x.cols()));
}

inline Matrix random_matrix(Index rows, Index cols, larinf::Engine& rng) {
  std::normal_distribution<double> z;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = z(rng);
  return m;
}

inline Vector random_vector(Index n, larinf::Engine& rng) { return random_matrix(n, 1, rng).col(0); }

inline Matrix random_spd(Index n, larinf::Engine& rng) {
  const Matrix a = random_matrix(n + 3, n, rng);
  return a.transpose() * a + 1e-3 * Matrix::Identity(n, n);
}

// Matrix with unit-norm columns, optionally correlated through a shared factor.
inline Matrix random_unit_design(Index n, Index p, larinf::Engine& rng, double shared = 0.0) {
  Matrix x = random_matrix(n, p, rng);
  if (shared != 0.0) x.colwise() += shared * random_vector(n, rng);
  for (Index j = 0; j < p; ++j) x.col(j).normalize();
  return x;
}

// Smallest gamma in (0, C/A] where |c_j - gamma w_j| meets C - gamma A, found
// by bisection on the (concave) gap function.
inline double bisection_gamma(double c, double w, double C, double A) {
  auto f = [&](double g) { return (C - g * A) - std::abs(c - g * w); };
  double lo = 0.0;
  double hi = C / A;
  if (f(hi) > 0.0) return hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Textbook LAR with explicit Gram inverses: the direct equiangular formula
// and the min+ step over both candidate fractions.
struct TextbookStep {
  Index entrant;
  int sign;
  double correlation;
  double angle;
};

inline std::vector<TextbookStep> textbook_lar(const Matrix& x, const Vector& y) {
  const Index p = x.cols();
  std::vector<TextbookStep> out;
  std::vector<Index> active;
  std::vector<bool> in(p, false);
  Vector fit = Vector::Zero(x.rows());
  Vector c = x.transpose() * y;
  Index j0;
  c.cwiseAbs().maxCoeff(&j0);
  Index next = j0;
  for (Index k = 0; k < p; ++k) {
    const double C = c.cwiseAbs().maxCoeff();
    active.push_back(next);
    in[next] = true;
    Matrix xa(x.rows(), static_cast<Index>(active.size()));
    Vector s(static_cast<Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) {
      s(i) = c(active[i]) >= 0 ? 1.0 : -1.0;
      xa.col(i) = s(i) * x.col(active[i]);
    }
    const Matrix ginv = (xa.transpose() * xa).inverse();
    const double A = 1.0 / std::sqrt(ginv.sum());
    const Vector a = xa * (A * ginv * Vector::Ones(xa.cols()));
    out.push_back({next, c(next) >= 0 ? 1 : -1, C, A});
    const Vector w = x.transpose() * a;
    double gamma = C / A;
    Index arg = -1;
    for (Index j = 0; j < p; ++j) {
      if (in[j]) continue;
      for (double f : {(C - c(j)) / (A - w(j)), (C + c(j)) / (A + w(j))}) {
        if (f > 0.0 && f < gamma) {
          gamma = f;
          arg = j;
        }
      }
    }
    fit += gamma * a;
    c = x.transpose() * (y - fit);
    if (arg < 0) break;
    next = arg;
  }
  return out;
}

// Pearson statistic of a sample against a continuous CDF over equiprobable bins.
template <class Cdf>
double pearson_statistic(const std::vector<double>& sample, int bins, Cdf cdf) {
  std::vector<double> counts(bins, 0.0);
  for (double v : sample) {
    int b = static_cast<int>(std::floor(cdf(v) * bins));
    counts[std::clamp(b, 0, bins - 1)] += 1.0;
  }
  const double expect = static_cast<double>(sample.size()) / bins;
  double stat = 0.0;
  for (double c : counts) stat += (c - expect) * (c - expect) / expect;
  return stat;
}

}  // namespace oracle
