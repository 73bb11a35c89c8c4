#include "larinf/error.hpp"
#include "larinf/inference.hpp"
#include "larinf/simulate.hpp"
#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

using namespace larinf;

TEST_CASE("sigma_hat is zero for a response in the column space") {
  Engine rng = stream(41, 0);
  const Matrix x = oracle::random_matrix(30, 4, rng);
  const StandardizedData d = standardize(x, x * oracle::random_vector(4, rng), false);
  CHECK(sigma_hat(d) <= 1e-12);
}

TEST_CASE("sigma_hat matches a direct least-squares fit") {
  Engine rng = stream(42, 0);
  for (int t = 0; t < 10; ++t) {
    const Matrix x = oracle::random_matrix(60, 5, rng);
    const Vector y = oracle::random_vector(60, rng) * 3.0 + x.col(0);
    const StandardizedData d = standardize(x, y, false);
    CHECK(sigma_hat(d) == doctest::Approx(oracle::ols_sigma(x, y)).epsilon(1e-10));
  }
}

TEST_CASE("sigma_hat concentrates around the unit noise level") {
  ScenarioSpec spec;
  spec.n = 1000;
  spec.p = 20;
  spec.m = 3;
  Engine design = stream(43, 0);
  const Scenario sc = generate_scenario(spec, design);
  int inside = 0;
  const int runs = 200;
  for (int r = 0; r < runs; ++r) {
    Engine noise = stream(43, 1 + r);
    const double s = sigma_hat(draw_response(sc, noise));
    inside += (s >= 0.9 && s <= 1.1);
  }
  CHECK(inside >= 0.99 * runs);
}

TEST_CASE("chi-squared quantiles") {
  CHECK(std::abs(chi2_upper_quantile(2, 0.05) + 2 * std::log(0.05)) <= 1e-8);
  CHECK(chi2_upper_quantile(18, 1.0 / 933) == doctest::Approx(42.097).epsilon(0.01 / 42.097));
  CHECK(chi2_upper_quantile(13, 1.0 / 933) == doctest::Approx(34.331).epsilon(0.01 / 34.331));
  for (int df : {1, 3, 10, 57, 100}) {
    for (double tail : {1e-4, 1e-3, 1.0 / 442, 0.05, 0.5}) {
      const boost::math::chi_squared dist(df);
      const double ref = boost::math::quantile(boost::math::complement(dist, tail));
      CHECK(std::abs(chi2_upper_quantile(df, tail) - ref) <= 1e-8 * std::max(1.0, ref));
    }
  }
  CHECK_THROWS_AS(chi2_upper_quantile(3, 0.0), Error);
  CHECK_THROWS_AS(chi2_upper_quantile(3, 1.0), Error);
  try {
    chi2_upper_quantile(3, 1.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidTail);
  }
}

TEST_CASE("chi-squared quantiles are monotone in df and tail") {
  const std::vector<double> tails{1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5};
  for (int df = 1; df <= 100; ++df) {
    for (std::size_t i = 0; i < tails.size(); ++i) {
      const double q = chi2_upper_quantile(df, tails[i]);
      if (df > 1) CHECK(q > chi2_upper_quantile(df - 1, tails[i]));
      if (i > 0) CHECK(q < chi2_upper_quantile(df, tails[i - 1]));
    }
  }
}

TEST_CASE("published threshold column for n = 933, p = 18") {
  const Vector t = chi2_thresholds(18, 933);
  const double expected[] = {42.097, 40.578, 39.044, 37.493, 35.922, 34.331, 32.716, 31.075, 29.403,
                             27.697, 25.949, 24.151, 22.292, 20.355, 18.313, 16.119, 13.677, 10.699};
  for (int k = 0; k < 18; ++k) CHECK(std::abs(t(k) - expected[k]) <= 0.01);
}

TEST_CASE("estimate_m on published tail sums") {
  // published S column with its thresholds: the rule gives 6
  Vector S(18);
  S << 2403.291, 460.676, 210.710, 180.969, 150.449, 44.194, 27.992, 22.874, 16.910, 14.217, 10.015, 8.789, 2.035,
      1.924, 1.425, 1.154, 1.062, 0.799;
  CHECK(estimate_m(S, chi2_thresholds(18, 933)) == 6);
  CHECK(estimate_m(Vector::Zero(18), chi2_thresholds(18, 933)) == 0);
  // equality is not exceedance
  const Vector t = chi2_thresholds(3, 100);
  Vector s3 = t;
  CHECK(estimate_m(s3, t) == 0);
  s3(0) += 1;
  CHECK(estimate_m(s3, t) == 1);
}

TEST_CASE("tail sums against an independent recomputation") {
  Engine rng = stream(44, 0);
  const Matrix xr = oracle::random_matrix(80, 6, rng);
  const Vector yr = xr.col(2) * 2.0 + oracle::random_vector(80, rng);
  const StandardizedData d = standardize(xr, yr, true);
  const LarPath path = lar_path(d, d.y);
  const double s = sigma_hat(d);
  const TailSums ts = tail_sums(path, s, d.n());
  // A_k^{-2} rebuilt from 1^T (X_k^T X_k)^{-1} 1 instead of the recursion
  Vector W(path.size());
  double prev_inv = 0.0;
  for (Index k = 1; k <= path.size(); ++k) {
    Matrix sc = linalg::select_columns(d.x, path.active_set(k));
    const auto sg = path.signs(k);
    for (Index i = 0; i < k; ++i) sc.col(i) *= sg[i];
    const double inv = (sc.transpose() * sc).inverse().sum();
    W(k - 1) = d.n() * (inv - prev_inv) * std::pow(path.steps[k - 1].correlation, 2) / (s * s);
    prev_inv = inv;
  }
  for (Index k = 0; k < path.size(); ++k) {
    CHECK(ts.W(k) == doctest::Approx(W(k)).epsilon(1e-9));
    CHECK(ts.S(k) == doctest::Approx(W.tail(path.size() - k).sum()).epsilon(1e-9));
    if (k > 0) CHECK(ts.S(k) <= ts.S(k - 1));
  }
  CHECK(ts.S(path.size() - 1) == ts.W(path.size() - 1));
}

TEST_CASE("studentized T: self-centring and first-step scaling") {
  Engine rng = stream(45, 0);
  const Matrix q = oracle::random_matrix(40, 3, rng).householderQr().householderQ() * Matrix::Identity(40, 3);
  const Vector y = oracle::random_vector(40, rng);
  const LarPath path = lar_path(q, y);
  Vector centers(3);
  for (Index k = 0; k < 3; ++k) centers(k) = path.steps[k].correlation;
  CHECK(studentized_T(path, centers, 1.3, 40).cwiseAbs().maxCoeff() == 0.0);
  Vector c1 = Vector::Zero(3);
  c1(0) = 0.2;
  const Vector t = studentized_T(path, c1, 1.3, 40);
  CHECK(t(0) == doctest::Approx(std::sqrt(40.0) * path.steps[0].sign * (path.steps[0].correlation - 0.2) / 1.3));
}

TEST_CASE("T equals e_k^T eps / |e_k| when the order is recovered") {
  ScenarioSpec spec;
  spec.n = 2000;
  spec.p = 8;
  spec.m = 3;
  spec.delta0 = 0.2;
  Engine design = stream(46, 0);
  const Scenario sc = generate_scenario(spec, design);
  int checked = 0;
  for (int r = 0; r < 20; ++r) {
    Engine noise = stream(46, 1 + r);
    std::normal_distribution<double> z;
    Vector eps(spec.n);
    for (Index i = 0; i < spec.n; ++i) eps(i) = z(noise);
    eps.array() -= eps.mean();
    const StandardizedData d = sc.data.with_response(sc.mu + eps / sc.data.response_scale);
    LarOptions opt;
    const LarPath path = lar_path(d, d.y, opt);
    if (path.active_set(spec.m) != sc.population.active_set(spec.m) || path.signs(spec.m) != sc.population.signs(spec.m)) continue;
    Vector centers = Vector::Zero(spec.p);
    for (Index k = 0; k < spec.m; ++k) centers(k) = sc.population.steps[k].correlation;
    const Vector t = studentized_T(path, centers, 1.0, spec.n);
    for (Index k = 0; k < spec.m; ++k) {
      const Vector& e = path.innovations[k];
      CHECK(std::abs(t(k) - e.dot(eps) / e.norm()) <= 1e-8);
    }
    ++checked;
  }
  CHECK(checked >= 15);
}
