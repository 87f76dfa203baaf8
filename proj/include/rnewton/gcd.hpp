#pragma once

// Numerical GCD of a polynomial pair from the GCD equation
//
//   (u v - p, u w - q) = (0, 0)
//
// whose solutions form the 1-dimensional family (t u, v / t, w / t).
// Rank-r Newton with r = dim(domain) - 1 converges to a point of that
// family, or to a stationary point next to it when p and q are perturbed.

#include <cstddef>
#include <optional>
#include <ostream>

#include "rnewton/newton.hpp"
#include "rnewton/poly.hpp"

namespace rnewton {

struct GcdTriple {
  SparsePoly u;  // GCD candidate
  SparsePoly v;  // p / u
  SparsePoly w;  // q / u
  /// ||J_r^+|| at the final Newton iterate.
  double condition = 0.0;
  /// ||(u v - p, u w - q)||
  double residual = 0.0;
};

/// Coefficient spaces hosting u, v and w.
struct GcdSupports {
  MonomialSupport u;
  MonomialSupport v;
  MonomialSupport w;
};

struct GcdOptions {
  std::size_t max_steps = 50;
  std::ostream* trace = nullptr;
};

struct GcdResult {
  GcdTriple triple;
  IterationTrace trace;
};

/// Matrix of a -> a * b for a with `cols` ascending coefficients;
/// b is an ascending coefficient vector.
Matrix convolution_matrix(const Vector& b, Eigen::Index cols);

/// Order-k subresultant matrix [C(p) | C(q)] with column blocks multiplying
/// p by P_{n-k} and q by P_{m-k}. Its null vectors are (w, -v) with
/// p w = q v. Order 1 is the Sylvester matrix.
Matrix subresultant_matrix(const Vector& p, const Vector& q, Eigen::Index k);

/// m + n minus the numerical rank (absolute theta) of the Sylvester matrix
/// of p/||p|| and q/||q||. Univariate polynomials only.
std::size_t gcd_degree_estimate(const SparsePoly& p, const SparsePoly& q, double theta);

/// Rough triple for GCD degree k: cofactors from the null vector of the
/// order-k subresultant matrix, u by least squares. Throws StructureError
/// when a cofactor comes out with deficient degree.
GcdTriple gcd_initialize(const SparsePoly& p, const SparsePoly& q, std::size_t k);

/// Dense univariate spaces P_k x P_{m-k} x P_{n-k}.
GcdSupports univariate_gcd_supports(const SparsePoly& p, const SparsePoly& q, std::size_t k);

/// Rank-r Newton refinement with r = dim(supports) - 1, followed by the
/// gauge normalization ||u|| = 1 with the leading coefficient of u
/// positive real.
GcdResult gcd_refine(const SparsePoly& p, const SparsePoly& q, const GcdTriple& start,
                     const GcdSupports& supports, const GcdOptions& opts = {});
/// Univariate overload; the degree is taken from `start.u`.
GcdResult gcd_refine(const SparsePoly& p, const SparsePoly& q, const GcdTriple& start,
                     const GcdOptions& opts = {});

/// Estimate (unless k is given), initialize and refine.
GcdResult numerical_gcd(const SparsePoly& p, const SparsePoly& q, std::optional<std::size_t> k,
                        double theta = 1e-8, const GcdOptions& opts = {});

/// The mapping (u, v, w) -> (u v - p, u w - q) over the given spaces.
Mapping gcd_mapping(const SparsePoly& p, const SparsePoly& q, const GcdSupports& supports);

}  // namespace rnewton
