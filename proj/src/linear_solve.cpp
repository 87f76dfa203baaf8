#include "rnewton/linear_solve.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "rnewton/error.hpp"

namespace rnewton {

namespace {

std::size_t resolve_rank(const SvdFactors& f, const RankSpec& spec) {
  const auto p = static_cast<std::size_t>(f.sigma.size());
  if (spec.rank) {
    if (*spec.rank > p) {
      throw RankDeficiencyError("rank " + std::to_string(*spec.rank) + " exceeds min(m, n) = " +
                                    std::to_string(p),
                                *spec.rank);
    }
    return *spec.rank;
  }
  if (!spec.theta) throw DimensionError("rank specification needs a rank or a tolerance");
  return numerical_rank(f.sigma, *spec.theta);
}

}  // namespace

AffineSolution general_solve(const Matrix& a, const Vector& b, const RankSpec& spec,
                             const Vector& x0_in) {
  validate_matrix(a);
  if (b.size() != a.rows()) {
    throw DimensionError("right-hand side has length " + std::to_string(b.size()) + ", matrix has " +
                         std::to_string(a.rows()) + " rows");
  }
  const Vector x0 = x0_in.size() == 0 ? Vector(Vector::Zero(a.cols())) : x0_in;
  if (x0.size() != a.cols()) {
    throw DimensionError("initial point has length " + std::to_string(x0.size()) + ", matrix has " +
                         std::to_string(a.cols()) + " columns");
  }
  if (!b.allFinite() || !x0.allFinite()) throw NumericalError("non-finite right-hand side or initial point");

  const SvdFactors f = svd(a);
  const std::size_t r = resolve_rank(f, spec);
  if (r == 0) {
    if (b.norm() == 0.0) {
      throw RankDeficiencyError("rank 0 with homogeneous right-hand side: the solution is trivial", 0);
    }
    throw RankDeficiencyError("rank 0 with nonzero right-hand side: no solution", 0);
  }
  const RankRProjection proj = rank_r_project(f, r);

  AffineSolution out;
  out.rank_used = r;
  out.particular = x0 - proj.pinv_apply(a * x0 - b);
  const auto n = a.cols();
  const auto ri = static_cast<Eigen::Index>(r);
  out.kernel_basis = f.v.rightCols(n - ri);
  out.condition = proj.pinv_norm();
  out.residual = (a * out.particular - b).norm();
  out.gap = proj.gap();
  return out;
}

Matrix linear_operator_matrix(const Mapping& l, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(l.domain.total_dim());
  const auto m = static_cast<Eigen::Index>(l.codomain.total_dim());
  Matrix mat(m, n);
  Vector e = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    mat.col(j) = l(e);
    e(j) = 0.0;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto probe = [&] {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
    return v;
  };
  for (int trial = 0; trial < 3; ++trial) {
    const Vector u = probe();
    const Vector v = probe();
    const Complex alpha(g(rng), g(rng));
    const Vector lu = l(u);
    const Vector lv = l(v);
    const Vector lsum = l(Vector(alpha * u + v));
    const double scale = std::max(1.0, std::abs(alpha) * lu.norm() + lv.norm());
    if ((lsum - alpha * lu - lv).norm() > 1e-10 * scale || (mat * u - lu).norm() > 1e-10 * scale) {
      throw StructureError("mapping is not linear");
    }
  }
  return mat;
}

StructuredSolution operator_solve(const Mapping& l, const Point& b, const RankSpec& spec,
                                  const std::optional<Point>& x0) {
  const Matrix mat = linear_operator_matrix(l);
  StructuredSolution out;
  out.coordinates =
      general_solve(mat, l.codomain.embed(b), spec, x0 ? l.domain.embed(*x0) : Vector());
  out.particular = l.domain.extract(out.coordinates.particular);
  for (Eigen::Index j = 0; j < out.coordinates.kernel_basis.cols(); ++j) {
    out.kernel.push_back(l.domain.extract(out.coordinates.kernel_basis.col(j)));
  }
  return out;
}

ErrorBoundReport error_bound_report(const Matrix& a, const Vector& b, const Vector& x,
                                    double delta_a, double delta_b, const RankSpec& spec) {
  validate_matrix(a);
  if (b.size() != a.rows() || x.size() != a.cols()) throw DimensionError("inconsistent system sizes");
  if (!(delta_a >= 0.0) || !(delta_b >= 0.0)) throw DimensionError("data error estimates must be nonnegative");

  const SvdFactors f = svd(a);
  ErrorBoundReport rep;
  rep.rank = resolve_rank(f, spec);
  if (rep.rank == 0) throw RankDeficiencyError("rank 0 system has no error bound", 0);
  const RankRProjection proj = rank_r_project(f, rep.rank);
  rep.norm_a = proj.norm();
  rep.norm_pinv = proj.pinv_norm();
  rep.backward_residual = (a * x - b).norm();

  const double eta = rep.norm_pinv * delta_a;
  if (eta >= 0.46) {
    rep.perturbation_too_large = true;
    rep.solution_bound = std::numeric_limits<double>::infinity();
    rep.general_solution_bound = std::numeric_limits<double>::infinity();
    return rep;
  }
  const double kappa = rep.norm_a * rep.norm_pinv;
  const double rhs_err = delta_b + rep.backward_residual;
  const double bnorm = b.norm();
  double rel_rhs = 0.0;
  if (rhs_err > 0.0) rel_rhs = bnorm > 0.0 ? rhs_err / bnorm : std::numeric_limits<double>::infinity();
  rep.solution_bound = kappa / (1.0 - eta) * (2.0 * std::sqrt(2.0) * delta_a / rep.norm_a + rel_rhs);

  const double xnorm = proj.pinv_apply(b).norm();
  rep.general_solution_bound = kappa * std::sqrt(4.0 * xnorm * xnorm + 1.0) /
                               (rep.norm_a - rep.norm_a * eta) * std::hypot(delta_a, delta_b);
  return rep;
}

}  // namespace rnewton
