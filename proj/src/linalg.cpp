#include "larinf/linalg.hpp"

#include "larinf/error.hpp"

#include <cmath>
#include <string>

namespace larinf {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::DegenerateResponse: return "DegenerateResponse";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::NoPositiveCandidate: return "NoPositiveCandidate";
    case ErrorKind::InvalidTail: return "InvalidTail";
    case ErrorKind::NotPrototypical: return "NotPrototypical";
    case ErrorKind::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

namespace linalg {

Vector solve_spd(const Matrix& gram, const Vector& rhs) {
  if (gram.rows() != gram.cols() || gram.rows() != rhs.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "solve_spd: gram is " + std::to_string(gram.rows()) + "x" +
                    std::to_string(gram.cols()) + ", rhs has " + std::to_string(rhs.size()));
  }
  const Eigen::LLT<Matrix> llt(gram);
  const double scale = gram.diagonal().cwiseAbs().maxCoeff();
  bool ok = llt.info() == Eigen::Success && scale > 0.0;
  if (ok) {
    const Matrix& l = llt.matrixLLT();
    for (Index i = 0; i < l.rows(); ++i) {
      // squared pivot relative to the largest diagonal entry of gram
      if (!(l(i, i) * l(i, i) > kRankTol * scale)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) {
    throw Error(ErrorKind::NotPositiveDefinite, "solve_spd: Cholesky pivot below rank tolerance");
  }
  return llt.solve(rhs);
}

Vector ProjectionBasis::project(const Vector& v) const {
  if (v.size() != dim() && !(empty() && q_.rows() == 0)) {
    throw Error(ErrorKind::DimensionMismatch, "project: vector length " + std::to_string(v.size()) +
                                                  " vs basis dimension " + std::to_string(dim()));
  }
  if (empty()) return Vector::Zero(v.size());
  return q_ * (q_.transpose() * v);
}

Vector ProjectionBasis::residual(const Vector& v) const { return v - project(v); }

Vector ProjectionBasis::append(const Vector& x, Index source_column) {
  if (q_.rows() == 0 && q_.cols() == 0) q_.resize(x.size(), 0);
  if (x.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "append: vector length " + std::to_string(x.size()) +
                                                  " vs basis dimension " + std::to_string(dim()));
  }
  Vector innovation = x;
  if (!empty()) {
    innovation -= q_ * (q_.transpose() * x);
  }
  const double norm = innovation.norm();
  const double ref = x.norm();
  if (!(norm > kRankTol * (ref > 0.0 ? ref : 1.0))) {
    throw Error(ErrorKind::RankDeficient,
                "append: innovation norm " + std::to_string(norm) + " below rank tolerance");
  }
  Vector q = innovation / norm;
  if (!empty()) {
    // second Gram-Schmidt pass
    q -= q_ * (q_.transpose() * q);
    q.normalize();
  }
  q_.conservativeResize(Eigen::NoChange, q_.cols() + 1);
  q_.col(q_.cols() - 1) = q;
  source_.push_back(source_column);
  return innovation;
}

Vector project(const ProjectionBasis& basis, const Vector& v) {
  if (basis.empty()) {
    throw Error(ErrorKind::InvalidArgument, "project: basis is empty");
  }
  return basis.project(v);
}

std::pair<ProjectionBasis, Vector> append_innovation(ProjectionBasis basis, const Vector& x_new,
                                                     Index source_column) {
  Vector innovation = basis.append(x_new, source_column);
  return {std::move(basis), std::move(innovation)};
}

ProjectionBasis basis_of(const Matrix& x) {
  ProjectionBasis basis(x.rows());
  for (Index j = 0; j < x.cols(); ++j) basis.append(x.col(j), j);
  return basis;
}

Matrix select_columns(const Matrix& x, const std::vector<Index>& cols) {
  Matrix out(x.rows(), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Index>(i)) = x.col(cols[i]);
  return out;
}

}  // namespace linalg
}  // namespace larinf
