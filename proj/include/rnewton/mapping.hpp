#pragma once

// Holomorphic mappings between structured spaces, represented through
// isometric coordinate layouts. A layout fixes one ordering of the
// coordinates; every Jacobian row and column follows that ordering.

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "rnewton/linalg.hpp"
#include "rnewton/poly.hpp"

namespace rnewton {

/// One factor of a product space.
struct LayoutComponent {
  enum class Kind { scalar, block, matrix, polynomial };

  Kind kind = Kind::scalar;
  Eigen::Index rows = 1;  // block length, or matrix rows
  Eigen::Index cols = 1;  // matrix columns
  MonomialSupport support;  // polynomial spaces only

  std::size_t size() const;
};

/// A value of one component: scalar, coordinate block, matrix or polynomial.
using Part = std::variant<Complex, Vector, Matrix, SparsePoly>;

/// A point of a product space, one part per layout component.
struct Point {
  std::vector<Part> parts;

  /// Root-sum-of-squares of the part norms.
  double norm() const;
};

class VectorSpaceLayout {
 public:
  VectorSpaceLayout() = default;
  explicit VectorSpaceLayout(std::vector<LayoutComponent> components);

  static LayoutComponent scalar();
  static LayoutComponent block(Eigen::Index n);
  static LayoutComponent matrix(Eigen::Index rows, Eigen::Index cols);
  static LayoutComponent polynomial(MonomialSupport support);

  /// Single coordinate block C^n.
  static VectorSpaceLayout coordinates(Eigen::Index n);

  const std::vector<LayoutComponent>& components() const noexcept { return components_; }
  std::size_t total_dim() const noexcept { return total_; }
  /// First coordinate of component `i`.
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }

  /// Flattens a structured point. Matrices are stacked column by column.
  Vector embed(const Point& p) const;
  Point extract(const Vector& coords) const;

 private:
  std::vector<LayoutComponent> components_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

/// A holomorphic mapping expressed in layout coordinates.
///
/// `eval` is required. The Jacobian comes from `jacobian` when supplied,
/// otherwise from central differences. `jacobian_derivative(x, y)` is the
/// Jacobian of x -> J(x) y; deflation uses it when present.
struct Mapping {
  VectorSpaceLayout domain;
  VectorSpaceLayout codomain;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;
  std::function<Matrix(const Vector&, const Vector&)> jacobian_derivative;

  Vector operator()(const Vector& x) const;
  /// Jacobian matrix (codomain dim x domain dim) at x.
  Matrix jacobian_at(const Vector& x) const;

  Point evaluate(const Point& x) const;
};

/// Builds a mapping from structured callbacks. `derivative(x, dx)` is the
/// Jacobian applied to a direction; its matrix is assembled column by column.
Mapping make_structured_mapping(VectorSpaceLayout domain, VectorSpaceLayout codomain,
                                std::function<Point(const Point&)> eval,
                                std::function<Point(const Point&, const Point&)> derivative = {});

/// Central-difference Jacobian with step h.
Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                                  double h);
/// Default step 1e-6 * max(1, ||x||).
double default_fd_step(const Vector& x);

/// Worst relative deviation between the columns of f.jacobian_at(x0) and
/// central differences of f.eval with step h.
double fd_jacobian_check(const Mapping& f, const Vector& x0, double h);

}  // namespace rnewton
