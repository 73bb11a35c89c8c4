#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

namespace larinf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace linalg {

// Relative tolerance below which a pivot or innovation norm is treated as
// numerically zero.
inline constexpr double kRankTol = 1e-10;

// Solves gram * w = rhs for symmetric positive-definite `gram`.
// Throws Error{NotPositiveDefinite} when a Cholesky pivot falls below
// kRankTol relative to the largest diagonal entry.
Vector solve_spd(const Matrix& gram, const Vector& rhs);

// Orthonormal basis for the span of a growing set of columns, kept in the
// order the columns were appended. Maintained by classical Gram-Schmidt with
// one reorthogonalization pass.
class ProjectionBasis {
 public:
  ProjectionBasis() = default;
  explicit ProjectionBasis(Index dim) : q_(dim, 0) {}

  Index dim() const noexcept { return q_.rows(); }
  Index size() const noexcept { return q_.cols(); }
  bool empty() const noexcept { return q_.cols() == 0; }

  const Matrix& vectors() const noexcept { return q_; }
  const std::vector<Index>& source_columns() const noexcept { return source_; }

  // Orthogonal projection of v onto the span.
  Vector project(const Vector& v) const;
  // (I - P) v.
  Vector residual(const Vector& v) const;

  // Appends x (tagged with its originating column index) and returns the
  // innovation (I - P) x computed against the basis *before* the append.
  // Throws Error{RankDeficient} if the innovation norm is <= kRankTol * |x|.
  Vector append(const Vector& x, Index source_column = -1);

 private:
  Matrix q_;
  std::vector<Index> source_;
};

// Free-function form of ProjectionBasis::project. An empty basis projects to 0.
Vector project(const ProjectionBasis& basis, const Vector& v);

// Value-semantics form of ProjectionBasis::append.
std::pair<ProjectionBasis, Vector> append_innovation(ProjectionBasis basis, const Vector& x_new,
                                                     Index source_column = -1);

// Orthonormal basis for all columns of x, in column order.
ProjectionBasis basis_of(const Matrix& x);

// Sub-matrix of x restricted to the listed columns, in list order.
Matrix select_columns(const Matrix& x, const std::vector<Index>& cols);

}  // namespace linalg
}  // namespace larinf
