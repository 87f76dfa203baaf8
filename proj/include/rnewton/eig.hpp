#pragma once

// Defective eigenvalue with multiplicity support m x k (geometric
// multiplicity m, smallest Jordan block k) from the eigen-equation
//
//   A X - lambda X - X S = O,   (lambda, X) in C x C^{n x k}
//
// refined by rank-r Newton with r = 1 + (n - m) k.

#include <cstddef>
#include <cstdint>
#include <ostream>

#include "rnewton/linear_solve.hpp"
#include "rnewton/newton.hpp"

namespace rnewton {

struct MultiplicitySupport {
  std::size_t m = 1;
  std::size_t k = 1;
};

/// k x k zero matrix with a unit superdiagonal.
Matrix default_shift_matrix(std::size_t k);

/// S must be strictly upper triangular with a nonzero superdiagonal chain.
void validate_shift_matrix(const Matrix& s);

/// (lambda, X) -> A X - lambda X - X S on C x C^{n x k}, with its
/// Jacobian [-vec(X) | I (x) (A - lambda I) - S^T (x) I].
Mapping eig_mapping(const Matrix& a, const Matrix& s);

/// 1 + (n - m) k
std::size_t eig_projection_rank(std::size_t n, const MultiplicitySupport& support);

struct EigInitialization {
  Matrix x0;
  /// Kernel of X -> (A - lambda0 I) X - X S at tolerance theta.
  std::size_t kernel_dim = 0;
};

/// Solves (A - lambda0 I) X - X S = O within theta and draws X0 as a seeded
/// random combination of the kernel basis, scaled to ||X0||_2 = 1. Throws StructureError when the
/// kernel dimension differs from m k.
EigInitialization eig_initialize(const Matrix& a, Complex lambda0, const MultiplicitySupport& support,
                                 double theta, std::uint64_t seed = 1, const Matrix& s = Matrix());

struct EigOptions {
  std::size_t max_steps = 50;
  std::ostream* trace = nullptr;
  /// Empty means default_shift_matrix(k).
  Matrix shift;
};

struct EigResult {
  Complex lambda;
  /// Near-orthonormal columns after the normalization step.
  Matrix x;
  /// Shift matrix R S R^{-1} used in the normalization step.
  Matrix s;
  double condition = 0.0;
  double relative_condition = 0.0;
  double residual = 0.0;
  IterationTrace trace;
  /// The single step taken from (lambda, Q) after X = Q R.
  IterationTrace normalization;
};

/// Rank-r Newton from (lambda0, X0), then thin QR X = Q R, S <- R S R^{-1}
/// and one more step from (lambda, Q).
EigResult defective_eig_refine(const Matrix& a, Complex lambda0, const Matrix& x0,
                               const MultiplicitySupport& support, const EigOptions& opts = {});

/// eig_initialize followed by defective_eig_refine.
EigResult defective_eig(const Matrix& a, Complex lambda0, const MultiplicitySupport& support, double theta,
                        std::uint64_t seed = 1, const EigOptions& opts = {});

}  // namespace rnewton
