#pragma once

// Structured factorization p = u0 * u1^l1 * ... * uk^lk refined by rank-r
// Newton over C x U1 x ... x Uk, with r = dim(C x U1 x ... x Uk) - k.
// The solutions form the k-dimensional gauge family
// (t0 u0, t1 u1, ..., tk uk) with t0 = t1^-l1 ... tk^-lk.

#include <cstddef>
#include <ostream>
#include <vector>

#include "rnewton/newton.hpp"
#include "rnewton/poly.hpp"

namespace rnewton {

struct FactorStructure {
  std::vector<int> exponents;               // l1..lk, each >= 1
  std::vector<MonomialSupport> hosting;     // U1..Uk, same variables

  std::size_t factor_count() const noexcept { return exponents.size(); }
};

struct FactorArray {
  Complex u0 = 1.0;
  std::vector<SparsePoly> factors;  // u1..uk
  /// ||J_r^+|| at the final Newton iterate.
  double condition = 0.0;
  /// ||u0 * prod uj^lj - p||
  double residual = 0.0;
};

struct FactorOptions {
  std::size_t max_steps = 50;
  std::ostream* trace = nullptr;
};

struct FactorResult {
  FactorArray array;
  IterationTrace trace;
};

/// u0 * prod uj^lj
SparsePoly factor_product(const FactorArray& arr, const std::vector<int>& exponents);

/// Scales each uj to unit norm with its leading (graded-lex largest)
/// coefficient positive real; u0 absorbs the compensating factor.
/// Throws StructureError on a zero factor.
FactorArray gauge_normalize(const FactorArray& arr, const std::vector<int>& exponents);

/// Throws StructureError when a monomial multiple x^a * u (a != 0) of the
/// factor stays inside the hosting space, i.e. the space is not proper.
void check_proper_hosting(const MonomialSupport& hosting, const SparsePoly& factor);

/// The mapping (u0, u1, ..., uk) -> u0 * prod uj^lj - p. Its codomain is
/// the product support of the hosting spaces merged with the support of p.
Mapping factor_mapping(const SparsePoly& p, const FactorStructure& structure);

/// Validates the structure and the initial array, runs rank-r Newton and
/// returns the gauge-normalized array.
FactorResult factor_refine(const SparsePoly& p, const FactorStructure& structure,
                           const FactorArray& initial, const FactorOptions& opts = {});

}  // namespace rnewton
