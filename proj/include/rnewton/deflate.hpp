#pragma once

// Depth deflation. A zero x* of f whose Jacobian J has rank r below the
// expected value becomes part of a zero of
//
//   g(x, y) = (f(x), J(x) y, R y - e)
//
// with R a random (n - r) x n matrix and e != 0. The expansion repeats
// until the zero is regular or semiregular.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "rnewton/newton.hpp"

namespace rnewton {

struct DeflationStage {
  std::size_t level = 0;
  /// g on C^n x C^n, n = domain dimension of the mapping being deflated.
  Mapping mapping;
  Matrix r;
  Vector e;
  /// Jacobian rank at the deflation point.
  std::size_t rank_used = 0;
};

/// Builds g for a mapping f with Jacobian rank r. R is complex Gaussian
/// from a generator seeded with `seed`; e is the first unit vector. The
/// x-derivative of J(x) y comes from f.jacobian_derivative when present and
/// from central differences otherwise. Throws StructureError when
/// r >= dim(domain).
DeflationStage deflate_step(const Mapping& f, std::size_t r, std::uint64_t seed, std::size_t level = 1);

/// Least-squares y with J(x) y = 0 and R y = e; returns (x, y).
Vector deflation_start(const Mapping& f, const DeflationStage& stage, const Vector& x);

/// Rank of J(x) with singular values above rel_theta * sigma_1.
std::size_t jacobian_rank(const Mapping& f, const Vector& x, double rel_theta = 1e-8);

struct DeflationOptions {
  /// Explicit Jacobian ranks: level j deflates right away with ranks[j].
  std::vector<std::size_t> ranks;
  /// Dimension of the solution set sought; the last level runs rank
  /// dim(domain) - dim Newton.
  std::size_t dim = 0;
  std::size_t max_depth = 3;
  std::uint64_t seed = 1;
  std::size_t max_steps = 50;
  double rank_theta = 1e-8;
  std::ostream* trace = nullptr;
};

struct DeflationResult {
  /// The x-component: first dim(f.domain) coordinates of `point`.
  Vector x;
  Vector point;
  std::vector<DeflationStage> stages;
  /// Newton run on the final mapping.
  IterationTrace trace;
  /// Numerical nullity of the final Jacobian.
  std::size_t nullity = 0;
};

/// Deflates until rank-r Newton on the current mapping converges to a point
/// whose numerical nullity does not exceed `dim`. Throws DeflationError
/// when max_depth levels do not suffice.
DeflationResult depth_deflation_solve(const Mapping& f, const Vector& x0, const DeflationOptions& opts = {});

}  // namespace rnewton
