#pragma once

// Singular and rank-deficient linear systems. The solution of A x = b
// nearest x0 is one step of rank-r Newton from x0:
//
//   x = A_r^+ b + (I - A_r^+ A) x0
//
// and the general solution is that point plus Kernel(A_r).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rnewton/linalg.hpp"
#include "rnewton/mapping.hpp"

namespace rnewton {

/// Either an explicit rank or an absolute singular-value tolerance.
/// An explicit rank wins when both are set.
struct RankSpec {
  std::optional<std::size_t> rank;
  std::optional<double> theta;

  static RankSpec exact(std::size_t r) { return {r, std::nullopt}; }
  static RankSpec tolerance(double theta) { return {std::nullopt, theta}; }
};

struct AffineSolution {
  Vector particular;
  /// Orthonormal columns spanning Kernel(A_r): the trailing right singular vectors.
  Matrix kernel_basis;
  std::size_t rank_used = 0;
  /// ||A_r^+||_2
  double condition = 0.0;
  /// ||A x - b||
  double residual = 0.0;
  /// sigma_r / sigma_{r+1}
  double gap = 0.0;
};

/// Throws DimensionError on inconsistent sizes and RankDeficiencyError
/// when the rank resolves to 0. An empty x0 means the origin.
AffineSolution general_solve(const Matrix& a, const Vector& b, const RankSpec& spec,
                             const Vector& x0 = Vector());

/// Matrix of a linear mapping in layout coordinates, column j = L(e_j).
/// Throws StructureError when random probes show L is not linear.
Matrix linear_operator_matrix(const Mapping& l, std::uint64_t seed = 20210101);

struct StructuredSolution {
  AffineSolution coordinates;
  Point particular;
  std::vector<Point> kernel;
};

/// general_solve for a linear mapping between structured spaces.
StructuredSolution operator_solve(const Mapping& l, const Point& b, const RankSpec& spec,
                                  const std::optional<Point>& x0 = std::nullopt);

/// Right-hand sides of the regularization bounds, evaluated with the
/// computed norms of the data in place of the unknown exact ones.
struct ErrorBoundReport {
  /// ||A^+|| ||dA|| reached 0.46; the bounds below are then not evaluated.
  bool perturbation_too_large = false;
  std::size_t rank = 0;
  double norm_a = 0.0;
  double norm_pinv = 0.0;
  /// ||A x - b|| of the supplied solution.
  double backward_residual = 0.0;
  /// Relative error bound for any backward accurate solution.
  double solution_bound = 0.0;
  /// Bound on the distance of the computed general solution (particular
  /// part and kernel) from the exact one.
  double general_solution_bound = 0.0;
};

ErrorBoundReport error_bound_report(const Matrix& a, const Vector& b, const Vector& x,
                                    double delta_a, double delta_b, const RankSpec& spec);

}  // namespace rnewton
