#include "rnewton/deflate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rnewton/error.hpp"

namespace rnewton {

namespace {

Matrix jacobian_product_derivative(const Mapping& f, const Vector& x, const Vector& y) {
  if (f.jacobian_derivative) return f.jacobian_derivative(x, y);
  return finite_difference_jacobian([&f, &y](const Vector& z) { return Vector(f.jacobian_at(z) * y); }, x,
                                    default_fd_step(x));
}

// Rank at the widest singular-value gap of at least 100; 0 if there is none.
std::size_t gap_rank(const RealVector& sigma) {
  std::size_t best = 0;
  double widest = 100.0;
  for (Eigen::Index i = 0; i + 1 < sigma.size(); ++i) {
    const double gap = sigma(i + 1) > 0.0 ? sigma(i) / sigma(i + 1) : HUGE_VAL;
    if (gap >= widest && sigma(i) > 0.0) {
      widest = gap;
      best = static_cast<std::size_t>(i + 1);
    }
  }
  return best;
}

}  // namespace

DeflationStage deflate_step(const Mapping& f, std::size_t r, std::uint64_t seed, std::size_t level) {
  const auto n = static_cast<Eigen::Index>(f.domain.total_dim());
  const auto m = static_cast<Eigen::Index>(f.codomain.total_dim());
  if (static_cast<Eigen::Index>(r) >= n) {
    throw StructureError("nothing to deflate: rank " + std::to_string(r) + " is not below the dimension " +
                         std::to_string(n));
  }
  const Eigen::Index d = n - static_cast<Eigen::Index>(r);

  DeflationStage st;
  st.level = level;
  st.rank_used = r;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  st.r.resize(d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) st.r(i, j) = Complex(g(rng), g(rng));
  }
  st.e = Vector::Zero(d);
  st.e(0) = 1.0;

  Mapping& out = st.mapping;
  out.domain = VectorSpaceLayout({VectorSpaceLayout::block(n), VectorSpaceLayout::block(n)});
  out.codomain =
      VectorSpaceLayout({VectorSpaceLayout::block(m), VectorSpaceLayout::block(m), VectorSpaceLayout::block(d)});
  const Matrix rm = st.r;
  const Vector e = st.e;
  out.eval = [f, rm, e, n, m, d](const Vector& z) {
    const Vector x = z.head(n);
    const Vector y = z.tail(n);
    Vector v(2 * m + d);
    v.head(m) = f(x);
    v.segment(m, m) = f.jacobian_at(x) * y;
    v.tail(d) = rm * y - e;
    return v;
  };
  out.jacobian = [f, rm, n, m, d](const Vector& z) {
    const Vector x = z.head(n);
    const Vector y = z.tail(n);
    const Matrix jx = f.jacobian_at(x);
    Matrix j = Matrix::Zero(2 * m + d, 2 * n);
    j.topLeftCorner(m, n) = jx;
    j.block(m, 0, m, n) = jacobian_product_derivative(f, x, y);
    j.block(m, n, m, n) = jx;
    j.bottomRightCorner(d, n) = rm;
    return j;
  };
  return st;
}

Vector deflation_start(const Mapping& f, const DeflationStage& stage, const Vector& x) {
  const auto n = x.size();
  const Matrix jx = f.jacobian_at(x);
  Matrix a(jx.rows() + stage.r.rows(), n);
  a << jx, stage.r;
  Vector rhs = Vector::Zero(a.rows());
  rhs.tail(stage.e.size()) = stage.e;
  Vector z(2 * n);
  z.head(n) = x;
  z.tail(n) = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  return z;
}

std::size_t jacobian_rank(const Mapping& f, const Vector& x, double rel_theta) {
  const SvdFactors s = svd(f.jacobian_at(x));
  return numerical_rank(s.sigma, rel_theta * s.sigma(0));
}

DeflationResult depth_deflation_solve(const Mapping& f, const Vector& x0, const DeflationOptions& opts) {
  if (opts.max_depth < 1) throw DimensionError("max depth must be at least 1");
  if (x0.size() != static_cast<Eigen::Index>(f.domain.total_dim())) {
    throw DimensionError("initial point has length " + std::to_string(x0.size()) + ", domain dimension is " +
                         std::to_string(f.domain.total_dim()));
  }
  DeflationResult out;
  std::vector<std::string> diagnostics;
  Mapping current = f;
  Vector z = x0;

  auto deflate = [&](std::size_t r) {
    const std::size_t level = out.stages.size() + 1;
    if (level > opts.max_depth) {
      diagnostics.push_back("depth " + std::to_string(opts.max_depth) + " exhausted");
      throw DeflationError("deflation depth exhausted without regularizing the zero", diagnostics);
    }
    DeflationStage st = deflate_step(current, r, opts.seed + level - 1, level);
    z = deflation_start(current, st, z);
    current = st.mapping;
    diagnostics.push_back("level " + std::to_string(level) + ": deflated with rank " + std::to_string(r));
    out.stages.push_back(std::move(st));
  };

  for (;;) {
    const std::size_t level = out.stages.size();
    if (level < opts.ranks.size()) {
      deflate(opts.ranks[level]);
      continue;
    }
    const std::size_t dim = current.domain.total_dim();
    if (opts.dim >= dim) throw DimensionError("solution dimension must be below the domain dimension");
    NewtonOptions nopts;
    nopts.rank = std::min(dim - opts.dim, current.codomain.total_dim());
    nopts.max_steps = opts.max_steps;
    nopts.trace = opts.trace;
    IterationTrace t;
    try {
      t = rank_r_newton(current, z, nopts);
    } catch (const NumericalError& err) {
      diagnostics.push_back("level " + std::to_string(level) + ": " + err.what());
      // Newton failed from z: deflate at z, with the widest gap when the
      // threshold rank shows no deficiency there.
      const SvdFactors s = svd(current.jacobian_at(z));
      std::size_t r = numerical_rank(s.sigma, opts.rank_theta * s.sigma(0));
      if (r >= std::min(dim, current.codomain.total_dim())) r = gap_rank(s.sigma);
      if (r == 0 && s.sigma(0) > 0.0) {
        throw DeflationError("Newton failed and the Jacobian shows no rank deficiency", diagnostics);
      }
      deflate(r);
      continue;
    }
    const std::size_t r = jacobian_rank(current, t.final_point, opts.rank_theta);
    const std::size_t nullity = dim - r;
    diagnostics.push_back("level " + std::to_string(level) + ": " + to_string(t.status) + ", nullity " +
                          std::to_string(nullity));
    if (t.converged() && nullity <= opts.dim) {
      out.trace = std::move(t);
      out.nullity = nullity;
      out.point = out.trace.final_point;
      out.x = out.point.head(static_cast<Eigen::Index>(f.domain.total_dim()));
      return out;
    }
    z = t.final_point;
    deflate(r);
  }
}

}  // namespace rnewton
