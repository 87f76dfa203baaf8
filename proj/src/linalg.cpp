#include "rnewton/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rnewton/error.hpp"

namespace rnewton {

void validate_matrix(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw DimensionError("matrix must have at least one row and one column");
  }
  if (!a.allFinite()) throw NumericalError("matrix has non-finite entries");
}

SvdFactors svd(const Matrix& a) {
  validate_matrix(a);
  Eigen::JacobiSVD<Matrix> jacobi(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (jacobi.info() != Eigen::Success) {
    throw NumericalError("SVD failed to converge");
  }
  SvdFactors out{jacobi.matrixU(), jacobi.singularValues(), jacobi.matrixV()};
  if (!out.sigma.allFinite() || !out.u.allFinite() || !out.v.allFinite()) {
    throw NumericalError("SVD produced non-finite factors");
  }
  return out;
}

RankRProjection::RankRProjection(Matrix u_r, RealVector sigma_r, Matrix v_r, double gap)
    : u_(std::move(u_r)), sigma_(std::move(sigma_r)), v_(std::move(v_r)), gap_(gap) {
  if (sigma_.size() == 0 || u_.cols() != sigma_.size() || v_.cols() != sigma_.size()) {
    throw DimensionError("inconsistent rank-r factors");
  }
}

Matrix RankRProjection::materialize() const {
  return u_ * sigma_.cast<Complex>().asDiagonal() * v_.adjoint();
}

Matrix RankRProjection::pseudoinverse() const {
  return v_ * sigma_.cwiseInverse().cast<Complex>().asDiagonal() * u_.adjoint();
}

Vector RankRProjection::apply(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != cols()) {
    throw DimensionError("rank-r projection: vector length " + std::to_string(x.size()) +
                         " does not match " + std::to_string(cols()) + " columns");
  }
  Vector coords = v_.adjoint() * x;
  coords.array() *= sigma_.cast<Complex>().array();
  return u_ * coords;
}

Vector RankRProjection::pinv_apply(const Vector& w) const {
  if (static_cast<std::size_t>(w.size()) != rows()) {
    throw DimensionError("pseudoinverse: vector length " + std::to_string(w.size()) +
                         " does not match " + std::to_string(rows()) + " rows");
  }
  Vector coords = u_.adjoint() * w;
  coords.array() /= sigma_.cast<Complex>().array();
  return v_ * coords;
}

RankRProjection rank_r_project(const SvdFactors& f, std::size_t r) {
  const auto p = static_cast<std::size_t>(f.sigma.size());
  if (r < 1 || r > p) {
    throw RankDeficiencyError("projection rank " + std::to_string(r) + " outside [1, " +
                                  std::to_string(p) + "]",
                              r);
  }
  const auto ri = static_cast<Eigen::Index>(r);
  const double sr = f.sigma(ri - 1);
  if (!(sr > 0.0)) {
    throw RankDeficiencyError("requested rank " + std::to_string(r) +
                                  " exceeds the rank of the matrix",
                              r);
  }
  double gap = std::numeric_limits<double>::infinity();
  if (r < p && f.sigma(ri) > 0.0) gap = sr / f.sigma(ri);
  return RankRProjection(f.u.leftCols(ri), f.sigma.head(ri), f.v.leftCols(ri), gap);
}

RankRProjection rank_r_project(const Matrix& a, std::size_t r) {
  return rank_r_project(svd(a), r);
}

std::size_t numerical_rank(const RealVector& sigma, double theta) {
  if (theta < 0.0) throw DimensionError("rank tolerance must be nonnegative");
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > theta) r = static_cast<std::size_t>(i) + 1;
  }
  return r;
}

std::size_t numerical_rank(const Matrix& a, double theta) {
  return numerical_rank(svd(a).sigma, theta);
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> jacobi(a);
  return jacobi.singularValues()(0);
}

double subspace_distance(const Matrix& b1, const Matrix& b2) {
  if (b1.cols() != b2.cols()) {
    throw DimensionError("subspace distance needs subspaces of equal dimension");
  }
  if (b1.rows() != b2.rows()) {
    throw DimensionError("subspace distance needs bases in the same ambient space");
  }
  if (b1.cols() == 0) return 0.0;
  const Matrix diff = b1 * b1.adjoint() - b2 * b2.adjoint();
  return spectral_norm(diff);
}

ThinQr thin_qr(const Matrix& a) {
  validate_matrix(a);
  const Eigen::Index m = a.rows();
  const Eigen::Index k = a.cols();
  if (k > m) throw ColumnRankError("thin QR: more columns than rows", static_cast<std::size_t>(m));
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * a.norm();

  Matrix q = Matrix::Zero(m, k);
  Matrix r = Matrix::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector col = a.col(j);
    // Two passes of Gram-Schmidt keep Q orthonormal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const Complex c = q.col(i).dot(col);
        r(i, j) += c;
        col -= c * q.col(i);
      }
    }
    const double nrm = col.norm();
    if (!(nrm > tol)) {
      throw ColumnRankError("thin QR: column " + std::to_string(j) +
                                " is linearly dependent on previous columns",
                            static_cast<std::size_t>(j));
    }
    r(j, j) = nrm;
    q.col(j) = col / nrm;
  }
  return {std::move(q), std::move(r)};
}

}  // namespace rnewton
