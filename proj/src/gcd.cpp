#include "rnewton/gcd.hpp"

#include <cmath>
#include <string>

#include "rnewton/error.hpp"

namespace rnewton {

namespace {

const std::string& single_variable(const SparsePoly& p, const char* name) {
  if (p.num_variables() != 1) {
    throw DimensionError(std::string(name) + " must be univariate, has " +
                         std::to_string(p.num_variables()) + " variables");
  }
  return p.variables().front();
}

void require_same_variable(const SparsePoly& p, const SparsePoly& q) {
  if (single_variable(p, "p") != single_variable(q, "q")) {
    throw DimensionError("p and q use different variables");
  }
}

Eigen::Index checked_degree(const SparsePoly& p, const char* name) {
  const int d = p.degree();
  if (d < 1) throw DimensionError(std::string(name) + " must have degree at least 1");
  return d;
}

SparsePoly on_support_vars(const SparsePoly& p, const MonomialSupport& s) {
  return p.with_variables(s.variables());
}

}  // namespace

Matrix convolution_matrix(const Vector& b, Eigen::Index cols) {
  if (cols < 1 || b.size() < 1) throw DimensionError("convolution matrix needs positive sizes");
  Matrix c = Matrix::Zero(b.size() + cols - 1, cols);
  for (Eigen::Index j = 0; j < cols; ++j) c.col(j).segment(j, b.size()) = b;
  return c;
}

Matrix subresultant_matrix(const Vector& p, const Vector& q, Eigen::Index k) {
  const Eigen::Index m = p.size() - 1;
  const Eigen::Index n = q.size() - 1;
  if (k < 1 || k > std::min(m, n)) throw DimensionError("subresultant order out of range");
  const Matrix cp = convolution_matrix(p, n - k + 1);
  const Matrix cq = convolution_matrix(q, m - k + 1);
  Matrix s(cp.rows(), cp.cols() + cq.cols());
  s << cp, cq;
  return s;
}

std::size_t gcd_degree_estimate(const SparsePoly& p, const SparsePoly& q, double theta) {
  require_same_variable(p, q);
  const Eigen::Index m = checked_degree(p, "p");
  const Eigen::Index n = checked_degree(q, "q");
  const Vector pc = univariate_coefficients(p) / p.norm();
  const Vector qc = univariate_coefficients(q) / q.norm();
  const std::size_t rank = numerical_rank(subresultant_matrix(pc, qc, 1), theta);
  return static_cast<std::size_t>(m + n) - rank;
}

GcdTriple gcd_initialize(const SparsePoly& p, const SparsePoly& q, std::size_t k_in) {
  require_same_variable(p, q);
  const std::string& x = p.variables().front();
  const Eigen::Index m = checked_degree(p, "p");
  const Eigen::Index n = checked_degree(q, "q");
  const auto k = static_cast<Eigen::Index>(k_in);
  if (k > std::min(m, n)) {
    throw DimensionError("GCD degree " + std::to_string(k) + " exceeds min(deg p, deg q)");
  }
  const Vector pc = univariate_coefficients(p);
  const Vector qc = univariate_coefficients(q.with_variables(p.variables()));

  GcdTriple t;
  if (k == 0) {
    t.u = SparsePoly(p.variables(), 1.0);
    t.v = p;
    t.w = q.with_variables(p.variables());
  } else {
    const SvdFactors f = svd(subresultant_matrix(pc, qc, k));
    const Vector nullvec = f.v.col(f.v.cols() - 1);
    const Vector w = nullvec.head(n - k + 1);
    const Vector v = -nullvec.tail(m - k + 1);
    if (std::abs(w(n - k)) <= 1e-8 * w.norm() || std::abs(v(m - k)) <= 1e-8 * v.norm()) {
      throw StructureError("cofactor of deficient degree for GCD degree " + std::to_string(k));
    }
    Matrix a(pc.size() + qc.size(), k + 1);
    a << convolution_matrix(v, k + 1), convolution_matrix(w, k + 1);
    Vector rhs(pc.size() + qc.size());
    rhs << pc, qc;
    const Vector u = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    t.u = univariate_poly(u, x);
    t.v = univariate_poly(v, x);
    t.w = univariate_poly(w, x);
  }
  t.residual = std::hypot((t.u * t.v - p).norm(), (t.u * t.w - q.with_variables(p.variables())).norm());
  return t;
}

GcdSupports univariate_gcd_supports(const SparsePoly& p, const SparsePoly& q, std::size_t k) {
  require_same_variable(p, q);
  const auto m = static_cast<std::size_t>(checked_degree(p, "p"));
  const auto n = static_cast<std::size_t>(checked_degree(q, "q"));
  if (k > std::min(m, n)) throw DimensionError("GCD degree exceeds min(deg p, deg q)");
  const auto& vars = p.variables();
  return {MonomialSupport::dense(vars, static_cast<int>(k)), MonomialSupport::dense(vars, static_cast<int>(m - k)),
          MonomialSupport::dense(vars, static_cast<int>(n - k))};
}

Mapping gcd_mapping(const SparsePoly& p_in, const SparsePoly& q_in, const GcdSupports& s) {
  const SparsePoly p = on_support_vars(p_in, s.u);
  const SparsePoly q = on_support_vars(q_in, s.u);
  const MonomialSupport sp = s.u.product(s.v).merged(MonomialSupport::of(p));
  const MonomialSupport sq = s.u.product(s.w).merged(MonomialSupport::of(q));
  VectorSpaceLayout dom({VectorSpaceLayout::polynomial(s.u), VectorSpaceLayout::polynomial(s.v),
                         VectorSpaceLayout::polynomial(s.w)});
  VectorSpaceLayout cod({VectorSpaceLayout::polynomial(sp), VectorSpaceLayout::polynomial(sq)});
  auto eval = [p, q](const Point& x) {
    const auto& u = std::get<SparsePoly>(x.parts[0]);
    const auto& v = std::get<SparsePoly>(x.parts[1]);
    const auto& w = std::get<SparsePoly>(x.parts[2]);
    return Point{{u * v - p, u * w - q}};
  };
  auto derivative = [](const Point& x, const Point& dx) {
    const auto& u = std::get<SparsePoly>(x.parts[0]);
    const auto& v = std::get<SparsePoly>(x.parts[1]);
    const auto& w = std::get<SparsePoly>(x.parts[2]);
    const auto& du = std::get<SparsePoly>(dx.parts[0]);
    const auto& dv = std::get<SparsePoly>(dx.parts[1]);
    const auto& dw = std::get<SparsePoly>(dx.parts[2]);
    return Point{{du * v + u * dv, du * w + u * dw}};
  };
  return make_structured_mapping(std::move(dom), std::move(cod), eval, derivative);
}

GcdResult gcd_refine(const SparsePoly& p, const SparsePoly& q, const GcdTriple& start,
                     const GcdSupports& supports, const GcdOptions& opts) {
  const Mapping f = gcd_mapping(p, q, supports);
  const auto& vars = supports.u.variables();
  const Vector x0 = f.domain.embed(
      Point{{start.u.with_variables(vars), start.v.with_variables(vars), start.w.with_variables(vars)}});

  NewtonOptions nopts;
  nopts.rank = f.domain.total_dim() - 1;
  nopts.max_steps = opts.max_steps;
  nopts.trace = opts.trace;
  GcdResult out;
  out.trace = rank_r_newton(f, x0, nopts);

  const Point x = f.domain.extract(out.trace.final_point);
  SparsePoly u = std::get<SparsePoly>(x.parts[0]);
  SparsePoly v = std::get<SparsePoly>(x.parts[1]);
  SparsePoly w = std::get<SparsePoly>(x.parts[2]);
  // Gauge: ||u|| = 1 with the leading coefficient of u positive real.
  const Complex lead = u.coefficient(supports.u.monomials().front());
  const double unorm = u.norm();
  if (unorm == 0.0) throw NumericalError("GCD candidate collapsed to zero");
  Complex c = 1.0 / unorm;
  if (std::abs(lead) > 0.0) c *= std::conj(lead) / std::abs(lead);
  u *= c;
  v *= 1.0 / c;
  w *= 1.0 / c;

  const Vector xn = f.domain.embed(Point{{u, v, w}});
  out.triple.u = std::move(u);
  out.triple.v = std::move(v);
  out.triple.w = std::move(w);
  out.triple.residual = f(xn).norm();
  out.triple.condition = out.trace.condition;
  return out;
}

GcdResult gcd_refine(const SparsePoly& p, const SparsePoly& q, const GcdTriple& start,
                     const GcdOptions& opts) {
  const int k = start.u.degree();
  if (k < 0) throw DimensionError("initial GCD candidate is zero");
  return gcd_refine(p, q, start, univariate_gcd_supports(p, q, static_cast<std::size_t>(k)), opts);
}

GcdResult numerical_gcd(const SparsePoly& p, const SparsePoly& q, std::optional<std::size_t> k,
                        double theta, const GcdOptions& opts) {
  const std::size_t degree = k ? *k : gcd_degree_estimate(p, q, theta);
  const GcdTriple start = gcd_initialize(p, q, degree);
  return gcd_refine(p, q, start, univariate_gcd_supports(p, q, degree), opts);
}

}  // namespace rnewton
