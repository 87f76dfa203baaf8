#include "rnewton/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rnewton/error.hpp"

namespace rnewton {

std::size_t LayoutComponent::size() const {
  switch (kind) {
    case Kind::scalar: return 1;
    case Kind::block: return static_cast<std::size_t>(rows);
    case Kind::matrix: return static_cast<std::size_t>(rows * cols);
    case Kind::polynomial: return support.size();
  }
  return 0;
}

namespace {

double part_norm(const Part& part) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Complex>) {
          return std::abs(v);
        } else {
          return v.norm();
        }
      },
      part);
}

}  // namespace

double Point::norm() const {
  double s = 0.0;
  for (const auto& p : parts) {
    const double n = part_norm(p);
    s += n * n;
  }
  return std::sqrt(s);
}

VectorSpaceLayout::VectorSpaceLayout(std::vector<LayoutComponent> components)
    : components_(std::move(components)) {
  offsets_.reserve(components_.size());
  for (const auto& c : components_) {
    if (c.rows < 0 || c.cols < 0) throw DimensionError("layout component with negative size");
    offsets_.push_back(total_);
    total_ += c.size();
  }
}

LayoutComponent VectorSpaceLayout::scalar() { return {LayoutComponent::Kind::scalar, 1, 1, {}}; }

LayoutComponent VectorSpaceLayout::block(Eigen::Index n) {
  return {LayoutComponent::Kind::block, n, 1, {}};
}

LayoutComponent VectorSpaceLayout::matrix(Eigen::Index rows, Eigen::Index cols) {
  return {LayoutComponent::Kind::matrix, rows, cols, {}};
}

LayoutComponent VectorSpaceLayout::polynomial(MonomialSupport support) {
  LayoutComponent c{LayoutComponent::Kind::polynomial, 1, 1, std::move(support)};
  c.rows = static_cast<Eigen::Index>(c.support.size());
  return c;
}

VectorSpaceLayout VectorSpaceLayout::coordinates(Eigen::Index n) {
  return VectorSpaceLayout({block(n)});
}

Vector VectorSpaceLayout::embed(const Point& p) const {
  if (p.parts.size() != components_.size()) {
    throw DimensionError("point has " + std::to_string(p.parts.size()) + " parts, layout has " +
                         std::to_string(components_.size()));
  }
  Vector out(static_cast<Eigen::Index>(total_));
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    const auto off = static_cast<Eigen::Index>(offsets_[i]);
    const auto n = static_cast<Eigen::Index>(c.size());
    const Part& part = p.parts[i];
    switch (c.kind) {
      case LayoutComponent::Kind::scalar: {
        const auto* v = std::get_if<Complex>(&part);
        if (!v) throw DimensionError("component " + std::to_string(i) + " expects a scalar");
        out(off) = *v;
        break;
      }
      case LayoutComponent::Kind::block: {
        const auto* v = std::get_if<Vector>(&part);
        if (!v || v->size() != n) {
          throw DimensionError("component " + std::to_string(i) + " expects a vector of length " +
                               std::to_string(n));
        }
        out.segment(off, n) = *v;
        break;
      }
      case LayoutComponent::Kind::matrix: {
        const auto* m = std::get_if<Matrix>(&part);
        if (!m || m->rows() != c.rows || m->cols() != c.cols) {
          throw DimensionError("component " + std::to_string(i) + " expects a " +
                               std::to_string(c.rows) + "x" + std::to_string(c.cols) + " matrix");
        }
        out.segment(off, n) = m->reshaped();
        break;
      }
      case LayoutComponent::Kind::polynomial: {
        const auto* poly = std::get_if<SparsePoly>(&part);
        if (!poly) throw DimensionError("component " + std::to_string(i) + " expects a polynomial");
        out.segment(off, n) = c.support.coefficients(*poly);
        break;
      }
    }
  }
  return out;
}

Point VectorSpaceLayout::extract(const Vector& coords) const {
  if (static_cast<std::size_t>(coords.size()) != total_) {
    throw DimensionError("coordinate vector has length " + std::to_string(coords.size()) +
                         ", layout dimension is " + std::to_string(total_));
  }
  Point p;
  p.parts.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    const auto off = static_cast<Eigen::Index>(offsets_[i]);
    const auto n = static_cast<Eigen::Index>(c.size());
    switch (c.kind) {
      case LayoutComponent::Kind::scalar: p.parts.emplace_back(coords(off)); break;
      case LayoutComponent::Kind::block: p.parts.emplace_back(Vector(coords.segment(off, n))); break;
      case LayoutComponent::Kind::matrix:
        p.parts.emplace_back(Matrix(coords.segment(off, n).reshaped(c.rows, c.cols)));
        break;
      case LayoutComponent::Kind::polynomial:
        p.parts.emplace_back(c.support.polynomial(coords.segment(off, n)));
        break;
    }
  }
  return p;
}

Vector Mapping::operator()(const Vector& x) const {
  if (!eval) throw DimensionError("mapping has no evaluation function");
  if (static_cast<std::size_t>(x.size()) != domain.total_dim()) {
    throw DimensionError("mapping argument has length " + std::to_string(x.size()) +
                         ", domain dimension is " + std::to_string(domain.total_dim()));
  }
  Vector y = eval(x);
  if (static_cast<std::size_t>(y.size()) != codomain.total_dim()) {
    throw DimensionError("mapping value has length " + std::to_string(y.size()) +
                         ", codomain dimension is " + std::to_string(codomain.total_dim()));
  }
  return y;
}

Matrix Mapping::jacobian_at(const Vector& x) const {
  Matrix j = jacobian ? jacobian(x) : finite_difference_jacobian(eval, x, default_fd_step(x));
  if (static_cast<std::size_t>(j.rows()) != codomain.total_dim() ||
      static_cast<std::size_t>(j.cols()) != domain.total_dim()) {
    throw DimensionError("Jacobian is " + std::to_string(j.rows()) + "x" + std::to_string(j.cols()) +
                         ", expected " + std::to_string(codomain.total_dim()) + "x" +
                         std::to_string(domain.total_dim()));
  }
  return j;
}

Point Mapping::evaluate(const Point& x) const { return codomain.extract((*this)(domain.embed(x))); }

Mapping make_structured_mapping(VectorSpaceLayout domain, VectorSpaceLayout codomain,
                                std::function<Point(const Point&)> eval,
                                std::function<Point(const Point&, const Point&)> derivative) {
  Mapping m;
  m.domain = std::move(domain);
  m.codomain = std::move(codomain);
  m.eval = [dom = m.domain, cod = m.codomain, eval](const Vector& x) {
    return cod.embed(eval(dom.extract(x)));
  };
  if (derivative) {
    m.jacobian = [dom = m.domain, cod = m.codomain, derivative](const Vector& x) {
      const Point px = dom.extract(x);
      const auto n = static_cast<Eigen::Index>(dom.total_dim());
      Matrix j(static_cast<Eigen::Index>(cod.total_dim()), n);
      Vector e = Vector::Zero(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        e(k) = 1.0;
        j.col(k) = cod.embed(derivative(px, dom.extract(e)));
        e(k) = 0.0;
      }
      return j;
    };
  }
  return m;
}

double default_fd_step(const Vector& x) { return 1e-6 * std::max(1.0, x.norm()); }

Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                                  double h) {
  if (!(h > 0.0)) throw DimensionError("finite-difference step must be positive");
  Matrix j;
  Vector xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    xp(k) = x(k) + h;
    const Vector fp = f(xp);
    xp(k) = x(k) - h;
    const Vector fm = f(xp);
    xp(k) = x(k);
    if (!fp.allFinite() || !fm.allFinite()) {
      throw DivergenceError("non-finite evaluation at a finite-difference probe");
    }
    if (k == 0) j.resize(fp.size(), x.size());
    j.col(k) = (fp - fm) / (2.0 * h);
  }
  return j;
}

double fd_jacobian_check(const Mapping& f, const Vector& x0, double h) {
  const Matrix analytic = f.jacobian_at(x0);
  const Matrix numeric = finite_difference_jacobian(f.eval, x0, h);
  double scale = 0.0;
  for (Eigen::Index k = 0; k < analytic.cols(); ++k) scale = std::max(scale, analytic.col(k).norm());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < analytic.cols(); ++k) {
    const double denom =
        std::max({analytic.col(k).norm(), numeric.col(k).norm(), 1e-6 * scale});
    if (denom == 0.0) continue;
    worst = std::max(worst, (analytic.col(k) - numeric.col(k)).norm() / denom);
  }
  return worst;
}

}  // namespace rnewton
