#pragma once

// Dense complex linear algebra: SVD, rank-r projection and its
// Moore-Penrose inverse, numerical rank, subspace distance, thin QR.

#include <complex>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

namespace rnewton {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Throws DimensionError for empty matrices and NumericalError for NaN/Inf entries.
void validate_matrix(const Matrix& a);

/// Full SVD A = U diag(sigma) V^H with sigma sorted non-increasing.
struct SvdFactors {
  Matrix u;           // m x m
  RealVector sigma;   // min(m, n)
  Matrix v;           // n x n
};

SvdFactors svd(const Matrix& a);

/// Gap below which a rank-r projection is considered a near tie.
inline constexpr double kRankGapWarning = 10.0;

/// Truncated SVD A_r = U_r diag(sigma_r) V_r^H together with the operations
/// the Newton iteration needs from it. Immutable after construction.
class RankRProjection {
 public:
  RankRProjection(Matrix u_r, RealVector sigma_r, Matrix v_r, double gap);

  std::size_t rank() const noexcept { return static_cast<std::size_t>(sigma_.size()); }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(u_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(v_.rows()); }

  const Matrix& u() const noexcept { return u_; }
  const RealVector& sigma() const noexcept { return sigma_; }
  const Matrix& v() const noexcept { return v_; }

  /// sigma_r / sigma_{r+1}; infinity when sigma_{r+1} = 0 or r = min(m, n).
  double gap() const noexcept { return gap_; }
  bool near_tie() const noexcept { return gap_ < kRankGapWarning; }

  Matrix materialize() const;
  Matrix pseudoinverse() const;

  /// A_r x
  Vector apply(const Vector& x) const;
  /// A_r^+ w = V_r diag(1/sigma) U_r^H w
  Vector pinv_apply(const Vector& w) const;

  /// ||A_r||_2 = sigma_1
  double norm() const noexcept { return sigma_(0); }
  /// ||A_r^+||_2 = 1 / sigma_r
  double pinv_norm() const noexcept { return 1.0 / sigma_(sigma_.size() - 1); }

 private:
  Matrix u_;
  RealVector sigma_;
  Matrix v_;
  double gap_;
};

/// Nearest rank-r matrix. Throws RankDeficiencyError if sigma_r = 0.
RankRProjection rank_r_project(const Matrix& a, std::size_t r);
RankRProjection rank_r_project(const SvdFactors& factors, std::size_t r);

/// Largest r with sigma_r > theta (theta absolute).
std::size_t numerical_rank(const Matrix& a, double theta);
std::size_t numerical_rank(const RealVector& sigma, double theta);

/// ||B1 B1^H - B2 B2^H||_2 for orthonormal bases of equal column count.
double subspace_distance(const Matrix& b1, const Matrix& b2);

struct ThinQr {
  Matrix q;  // m x k, orthonormal columns
  Matrix r;  // k x k, upper triangular with positive real diagonal
};

/// Thin QR of a full-column-rank matrix. Throws ColumnRankError naming the
/// first column that is numerically dependent on its predecessors.
ThinQr thin_qr(const Matrix& a);

/// 2-norm of the largest singular value.
double spectral_norm(const Matrix& a);

}  // namespace rnewton
