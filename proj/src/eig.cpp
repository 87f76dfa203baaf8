#include "rnewton/eig.hpp"

#include <random>
#include <string>

#include "rnewton/error.hpp"

namespace rnewton {

namespace {

void validate_problem(const Matrix& a, const MultiplicitySupport& sup) {
  validate_matrix(a);
  if (a.rows() != a.cols()) throw DimensionError("eigenvalue problems need a square matrix");
  const auto n = static_cast<std::size_t>(a.rows());
  if (sup.m < 1 || sup.k < 1 || sup.m * sup.k > n) {
    throw DimensionError("multiplicity support " + std::to_string(sup.m) + "x" + std::to_string(sup.k) +
                         " does not fit a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
}

Matrix shift_or_default(const Matrix& s, std::size_t k) {
  if (s.size() == 0) return default_shift_matrix(k);
  if (static_cast<std::size_t>(s.rows()) != k || s.rows() != s.cols()) {
    throw DimensionError("shift matrix must be " + std::to_string(k) + "x" + std::to_string(k));
  }
  validate_shift_matrix(s);
  return s;
}

}  // namespace

Matrix default_shift_matrix(std::size_t k) {
  const auto kk = static_cast<Eigen::Index>(k);
  Matrix s = Matrix::Zero(kk, kk);
  for (Eigen::Index i = 0; i + 1 < kk; ++i) s(i, i + 1) = 1.0;
  return s;
}

void validate_shift_matrix(const Matrix& s) {
  if (s.rows() != s.cols()) throw DimensionError("shift matrix must be square");
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      if (s(i, j) != 0.0) throw StructureError("shift matrix must be strictly upper triangular");
    }
    if (i + 1 < s.rows() && s(i, i + 1) == 0.0) {
      throw StructureError("shift matrix needs a nonzero superdiagonal");
    }
  }
}

std::size_t eig_projection_rank(std::size_t n, const MultiplicitySupport& support) {
  return 1 + (n - support.m) * support.k;
}

Mapping eig_mapping(const Matrix& a, const Matrix& s) {
  const Eigen::Index n = a.rows();
  const Eigen::Index k = s.rows();
  Mapping f;
  f.domain = VectorSpaceLayout({VectorSpaceLayout::scalar(), VectorSpaceLayout::matrix(n, k)});
  f.codomain = VectorSpaceLayout({VectorSpaceLayout::matrix(n, k)});
  f.eval = [a, s, n, k](const Vector& z) {
    const Complex lambda = z(0);
    const auto x = z.segment(1, n * k).reshaped(n, k);
    const Matrix r = a * x - lambda * x - x * s;
    return Vector(r.reshaped());
  };
  f.jacobian = [a, s, n, k](const Vector& z) {
    const Complex lambda = z(0);
    Matrix j = Matrix::Zero(n * k, n * k + 1);
    j.col(0) = -z.segment(1, n * k);
    const Matrix shifted = a - lambda * Matrix::Identity(n, n);
    for (Eigen::Index c = 0; c < k; ++c) {
      j.block(c * n, 1 + c * n, n, n) = shifted;
      // -(X S) column c = -sum_i s(i, c) x_i
      for (Eigen::Index i = 0; i < k; ++i) {
        if (s(i, c) != 0.0) j.block(c * n, 1 + i * n, n, n).diagonal().array() -= s(i, c);
      }
    }
    return j;
  };
  return f;
}

EigInitialization eig_initialize(const Matrix& a, Complex lambda0, const MultiplicitySupport& support,
                                 double theta, std::uint64_t seed, const Matrix& s_in) {
  validate_problem(a, support);
  const Matrix s = shift_or_default(s_in, support.k);
  const Eigen::Index n = a.rows();
  const auto k = static_cast<Eigen::Index>(support.k);
  const Matrix shifted = a - lambda0 * Matrix::Identity(n, n);

  Mapping l;
  l.domain = VectorSpaceLayout({VectorSpaceLayout::matrix(n, k)});
  l.codomain = l.domain;
  l.eval = [shifted, s, n, k](const Vector& z) {
    const auto x = z.reshaped(n, k);
    return Vector((shifted * x - x * s).reshaped());
  };
  const AffineSolution sol = general_solve(linear_operator_matrix(l), Vector::Zero(n * k), RankSpec::tolerance(theta));

  EigInitialization out;
  out.kernel_dim = static_cast<std::size_t>(sol.kernel_basis.cols());
  if (out.kernel_dim != support.m * support.k) {
    throw StructureError("kernel dimension " + std::to_string(out.kernel_dim) + " at tolerance " +
                         std::to_string(theta) + " does not match multiplicity support " + std::to_string(support.m) +
                         "x" + std::to_string(support.k));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vector c(sol.kernel_basis.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(g(rng), g(rng));
    Matrix x0 = (sol.kernel_basis * c).reshaped(n, k);
    x0 /= spectral_norm(x0);
    try {
      thin_qr(x0);
    } catch (const ColumnRankError&) {
      continue;
    }
    out.x0 = x0;
    return out;
  }
  throw StructureError("no full-column-rank combination of the kernel basis found");
}

EigResult defective_eig_refine(const Matrix& a, Complex lambda0, const Matrix& x0,
                               const MultiplicitySupport& support, const EigOptions& opts) {
  validate_problem(a, support);
  const Matrix s = shift_or_default(opts.shift, support.k);
  const Eigen::Index n = a.rows();
  const auto k = static_cast<Eigen::Index>(support.k);
  if (x0.rows() != n || x0.cols() != k) {
    throw DimensionError("initial X must be " + std::to_string(n) + "x" + std::to_string(k));
  }
  thin_qr(x0);  // full column rank

  NewtonOptions nopts;
  nopts.rank = eig_projection_rank(static_cast<std::size_t>(n), support);
  nopts.max_steps = opts.max_steps;
  nopts.trace = opts.trace;
  Vector z0(1 + n * k);
  z0(0) = lambda0;
  z0.tail(n * k) = x0.reshaped();

  EigResult out;
  out.trace = rank_r_newton(eig_mapping(a, s), z0, nopts);

  // Normalize X = Q R, carry S to R S R^{-1} and take one more step from (lambda, Q).
  const Complex lambda = out.trace.final_point(0);
  const ThinQr qr = thin_qr(out.trace.final_point.tail(n * k).reshaped(n, k));
  const Matrix r = qr.r;
  out.s = r * s * r.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  const Mapping fn = eig_mapping(a, out.s);
  Vector z1(1 + n * k);
  z1(0) = lambda;
  z1.tail(n * k) = qr.q.reshaped();
  NewtonOptions one = nopts;
  one.max_steps = 1;
  one.trace = nullptr;
  out.normalization = rank_r_newton(fn, z1, one);

  const Vector& z = out.normalization.final_point;
  out.lambda = z(0);
  out.x = z.tail(n * k).reshaped(n, k);
  out.residual = out.normalization.final_residual();
  out.condition = out.normalization.condition;
  out.relative_condition = out.normalization.relative_condition;
  return out;
}

EigResult defective_eig(const Matrix& a, Complex lambda0, const MultiplicitySupport& support, double theta,
                        std::uint64_t seed, const EigOptions& opts) {
  const EigInitialization init = eig_initialize(a, lambda0, support, theta, seed, opts.shift);
  return defective_eig_refine(a, lambda0, init.x0, support, opts);
}

}  // namespace rnewton
