#include "larinf/error.hpp"
#include "larinf/linalg.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace larinf;

TEST_CASE("solve_spd on small systems") {
  const Vector w = linalg::solve_spd(Matrix::Identity(3, 3), Vector::LinSpaced(3, 1, 3));
  CHECK((w - Vector::LinSpaced(3, 1, 3)).norm() < 1e-15);

  Matrix g(2, 2);
  g << 2, 0, 0, 2;
  Vector rhs(2);
  rhs << 2, 4;
  const Vector d = linalg::solve_spd(g, rhs);
  CHECK(d(0) == doctest::Approx(1.0));
  CHECK(d(1) == doctest::Approx(2.0));
}

TEST_CASE("solve_spd residual on random SPD systems up to size 100") {
  Engine rng = stream(11, 0);
  for (Index n : {1, 2, 5, 17, 50, 100}) {
    const Matrix g = oracle::random_spd(n, rng);
    const Vector b = oracle::random_vector(n, rng);
    const Vector w = linalg::solve_spd(g, b);
    CHECK((g * w - b).norm() <= 1e-10 * b.norm());
  }
}

TEST_CASE("solve_spd rejects singular Gram matrices") {
  Matrix g = Matrix::Ones(3, 3);
  CHECK_THROWS_AS(linalg::solve_spd(g, Vector::Ones(3)), Error);
  try {
    linalg::solve_spd(g, Vector::Ones(3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
  }
}

TEST_CASE("projection onto an axis and idempotence") {
  linalg::ProjectionBasis b(3);
  b.append(Vector::Unit(3, 0), 0);
  Vector v(3);
  v << 1, 2, 3;
  const Vector pv = linalg::project(b, v);
  CHECK((pv - Vector::Unit(3, 0)).norm() < 1e-15);
  CHECK((linalg::project(b, pv) - pv).norm() <= 1e-10);
  CHECK((linalg::project(b, Vector::Unit(3, 0) * 4.0) - Vector::Unit(3, 0) * 4.0).norm() <= 1e-10);
}

TEST_CASE("projection matches the normal-equations oracle") {
  Engine rng = stream(12, 0);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = oracle::random_matrix(30, 1 + t % 6, rng);
    const Vector v = oracle::random_vector(30, rng);
    const linalg::ProjectionBasis b = linalg::basis_of(x);
    const Vector pv = linalg::project(b, v);
    CHECK((pv - oracle::normal_equations_projection(x, v)).norm() <= 1e-10 * (1 + v.norm()));
    CHECK((b.vectors().transpose() * (v - pv)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((linalg::project(b, pv) - pv).norm() <= 1e-10);
  }
}

TEST_CASE("project checks its inputs") {
  linalg::ProjectionBasis empty(3);
  CHECK_THROWS_AS(linalg::project(empty, Vector::Ones(3)), Error);
  const linalg::ProjectionBasis b = linalg::basis_of(Matrix::Identity(3, 2));
  try {
    linalg::project(b, Vector::Ones(4));
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("append_innovation examples") {
  Vector x(2);
  x << 0.6, 0.8;
  auto [b1, e1] = linalg::append_innovation(linalg::ProjectionBasis(2), x, 0);
  CHECK((e1 - x).norm() < 1e-15);
  CHECK(b1.size() == 1);

  linalg::ProjectionBasis b(3);
  b.append(Vector::Unit(3, 0));
  Vector y(3);
  y << 1, 1, 0;
  y /= std::sqrt(2.0);
  auto [b2, e2] = linalg::append_innovation(b, y, 1);
  CHECK(e2(0) == doctest::Approx(0.0));
  CHECK(e2(1) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(e2(2) == doctest::Approx(0.0));
  CHECK(b2.source_columns() == std::vector<Index>{-1, 1});
}

TEST_CASE("sequential innovations stay orthogonal") {
  Engine rng = stream(13, 0);
  const Matrix x = oracle::random_matrix(6, 3, rng);
  linalg::ProjectionBasis b(6);
  std::vector<Vector> es;
  for (Index j = 0; j < 3; ++j) es.push_back(b.append(x.col(j), j));
  double worst = 0;
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = i + 1; j < es.size(); ++j) worst = std::max(worst, std::abs(es[i].dot(es[j])));
  CHECK(worst <= 1e-10);
  const Matrix q = b.vectors();
  CHECK((q.transpose() * q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("collinear entrant is rank deficient") {
  linalg::ProjectionBasis b(3);
  b.append(Vector::Unit(3, 0));
  try {
    b.append(2.0 * Vector::Unit(3, 0));
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
}
