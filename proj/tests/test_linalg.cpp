#include <doctest.h>

#include <cmath>
#include <random>

#include "rnewton/error.hpp"
#include "rnewton/linalg.hpp"
#include "test_support.hpp"

using namespace rnewton;
using namespace rnewton::testing;

TEST_CASE("svd of a diagonal matrix") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const SvdFactors f = svd(a);
  CHECK(f.sigma(0) == doctest::Approx(3.0));
  CHECK(f.sigma(1) == doctest::Approx(1.0));
  CHECK((f.u.cwiseAbs() - Matrix::Identity(2, 2).cwiseAbs()).norm() < 1e-14);
  CHECK((f.v.cwiseAbs() - Matrix::Identity(2, 2).cwiseAbs()).norm() < 1e-14);
}

TEST_CASE("svd of the zero matrix") {
  const SvdFactors f = svd(Matrix::Zero(2, 2));
  CHECK(f.sigma(0) == 0.0);
  CHECK(f.sigma(1) == 0.0);
}

TEST_CASE("svd reconstruction and orthonormality on random matrices") {
  std::mt19937_64 rng(7);
  for (auto [m, n] : {std::pair{5, 3}, std::pair{3, 5}, std::pair{4, 4}}) {
    const Matrix a = random_matrix(rng, m, n);
    const SvdFactors f = svd(a);
    Matrix sigma = Matrix::Zero(m, n);
    for (Eigen::Index i = 0; i < f.sigma.size(); ++i) sigma(i, i) = f.sigma(i);
    CHECK((f.u * sigma * f.v.adjoint() - a).norm() <= 1e-12 * a.norm());
    CHECK((f.u.adjoint() * f.u - Matrix::Identity(m, m)).norm() <= 1e-12 * std::max(m, n));
    CHECK((f.v.adjoint() * f.v - Matrix::Identity(n, n)).norm() <= 1e-12 * std::max(m, n));
    for (Eigen::Index i = 1; i < f.sigma.size(); ++i) CHECK(f.sigma(i) <= f.sigma(i - 1));
  }
}

TEST_CASE("svd rejects non-finite and empty input") {
  Matrix a = Matrix::Ones(2, 2);
  a(0, 1) = std::nan("");
  CHECK_THROWS_AS(svd(a), NumericalError);
  CHECK_THROWS_AS(svd(Matrix(0, 3)), DimensionError);
}

TEST_CASE("rank-r projection keeps the dominant direction") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const RankRProjection p = rank_r_project(a, 1);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 2.0;
  CHECK((p.materialize() - expected).norm() < 1e-15);
  CHECK(p.gap() == doctest::Approx(2.0));
  CHECK(p.near_tie());
}

TEST_CASE("rank-r projection of an exact rank-r matrix is the identity map") {
  std::mt19937_64 rng(11);
  const Matrix a = random_rank_matrix(rng, 6, 5, 3);
  const RankRProjection p = rank_r_project(a, 3);
  CHECK((p.materialize() - a).norm() <= 1e-12 * a.norm());
  CHECK(p.gap() > 1e10);
}

TEST_CASE("rank-r projection is the nearest rank-r matrix (random search)") {
  std::mt19937_64 rng(13);
  const Matrix a = random_matrix(rng, 4, 4);
  const Matrix ar = rank_r_project(a, 2).materialize();
  const double best = (ar - a).norm();
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix b;
    if (trial % 2 == 0) {
      b = random_rank_matrix(rng, 4, 4, 2);
    } else {
      // Rank-2 candidates close to A_r probe the neighbourhood of the optimum.
      const double scale = std::pow(10.0, -1.0 - 3.0 * (trial % 7) / 6.0);
      const SvdFactors f = svd(ar);
      const Matrix u = f.u.leftCols(2) + scale * random_matrix(rng, 4, 2);
      const Matrix v = (f.sigma.head(2).cast<Complex>().asDiagonal() * f.v.leftCols(2).adjoint()) +
                       scale * random_matrix(rng, 2, 4);
      b = u * v;
    }
    CHECK((b - a).norm() >= best - 1e-12);
  }
}

TEST_CASE("rank-r projection errors") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  CHECK_THROWS_AS(rank_r_project(a, 2), RankDeficiencyError);
  CHECK_THROWS_AS(rank_r_project(a, 0), RankDeficiencyError);
  CHECK_THROWS_AS(rank_r_project(a, 4), RankDeficiencyError);
}

TEST_CASE("pseudoinverse application on a diagonal matrix") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const RankRProjection p = rank_r_project(a, 1);
  Vector w(2);
  w << 4.0, 5.0;
  const Vector x = p.pinv_apply(w);
  CHECK(std::abs(x(0) - Complex(2.0)) < 1e-15);
  CHECK(std::abs(x(1)) < 1e-15);

  Vector orth(2);
  orth << 0.0, 3.0;
  CHECK(p.pinv_apply(orth).norm() < 1e-15);
  CHECK_THROWS_AS(p.pinv_apply(Vector::Ones(3)), DimensionError);
}

TEST_CASE("Moore-Penrose identities hold for the pseudoinverse application") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index m = 3 + trial % 4;
    const Eigen::Index n = 2 + (trial * 3) % 5;
    const Eigen::Index r = 1 + trial % std::min(m, n);
    const Matrix a = random_rank_matrix(rng, m, n, r);
    const RankRProjection p = rank_r_project(a, static_cast<std::size_t>(r));
    const Matrix mm = p.materialize();
    const Vector w = random_vector(rng, m);
    const Vector v = random_vector(rng, n);
    const Vector pw = p.pinv_apply(w);
    // M M^+ M v = M v, M^+ M M^+ w = M^+ w
    CHECK((mm * p.pinv_apply(mm * v) - mm * v).norm() <= 1e-10 * (mm * v).norm());
    CHECK((p.pinv_apply(mm * pw) - pw).norm() <= 1e-10 * pw.norm());
    // (M M^+) and (M^+ M) are Hermitian: <M M^+ w, w2> = <w, M M^+ w2>
    const Vector w2 = random_vector(rng, m);
    const Complex lhs = (mm * pw).dot(w2);
    const Complex rhs = w.dot(mm * p.pinv_apply(w2));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * w.norm() * w2.norm());
    // x lies in range(V_r)
    CHECK((p.v() * (p.v().adjoint() * pw) - pw).norm() <= 1e-12 * pw.norm());
  }
}

TEST_CASE("projection idempotence and norms match power iteration") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_matrix(rng, 5, 4);
    const RankRProjection p = rank_r_project(a, 2);
    const Matrix ar = p.materialize();
    CHECK((rank_r_project(ar, 2).materialize() - ar).norm() <= 1e-12 * ar.norm());
    CHECK(power_iteration_norm(ar) == doctest::Approx(p.norm()).epsilon(1e-8));
    CHECK(power_iteration_norm(p.pseudoinverse()) == doctest::Approx(p.pinv_norm()).epsilon(1e-8));
  }
}

TEST_CASE("numerical rank") {
  std::mt19937_64 rng(23);
  RealVector sigma(3);
  sigma << 1.0, 1e-1, 1e-9;
  const Matrix a = matrix_with_singular_values(rng, 4, 3, sigma);
  CHECK(numerical_rank(a, 1e-6) == 2);
  CHECK(numerical_rank(Matrix(Matrix::Identity(3, 3)), 0.5) == 3);
  CHECK(numerical_rank(Matrix(Matrix::Zero(3, 2)), 0.0) == 0);
  CHECK(numerical_rank(Matrix(Matrix::Zero(3, 2)), 1.0) == 0);
  CHECK_THROWS_AS(numerical_rank(a, -1.0), DimensionError);
}

TEST_CASE("numerical rank at zero tolerance counts positive singular values") {
  std::mt19937_64 rng(29);
  for (int r = 1; r <= 3; ++r) {
    RealVector sigma = RealVector::Zero(4);
    for (int i = 0; i < r; ++i) sigma(i) = 1.0 + i;
    std::sort(sigma.data(), sigma.data() + 4, std::greater<>());
    const SvdFactors f = svd(matrix_with_singular_values(rng, 5, 4, sigma));
    std::size_t positive = 0;
    for (Eigen::Index i = 0; i < f.sigma.size(); ++i) positive += f.sigma(i) > 0.0 ? 1 : 0;
    CHECK(numerical_rank(f.sigma, 0.0) == positive);
  }
}

TEST_CASE("subspace distance") {
  const Matrix e1 = Matrix::Identity(2, 2).col(0);
  const Matrix e2 = Matrix::Identity(2, 2).col(1);
  CHECK(subspace_distance(e1, e1) < 1e-15);
  CHECK(subspace_distance(e1, e2) == doctest::Approx(1.0));
  const double alpha = 0.3;
  Matrix line(2, 1);
  line << std::cos(alpha), std::sin(alpha);
  CHECK(subspace_distance(e1, line) == doctest::Approx(std::sin(alpha)).epsilon(1e-13));
  CHECK(subspace_distance(line, e1) == doctest::Approx(subspace_distance(e1, line)).epsilon(1e-14));
  CHECK_THROWS_AS(subspace_distance(e1, Matrix::Identity(2, 2)), DimensionError);
}

TEST_CASE("thin QR") {
  std::mt19937_64 rng(31);
  const Matrix q0 = random_orthonormal(rng, 5, 3);
  const ThinQr f0 = thin_qr(q0);
  // R is a diagonal of unit-modulus phases; with a positive diagonal it is I.
  CHECK((f0.r - Matrix::Identity(3, 3)).norm() < 1e-13);
  CHECK((f0.q - q0).norm() < 1e-13);

  Matrix col(2, 1);
  col << 2.0, 0.0;
  const ThinQr f1 = thin_qr(col);
  CHECK(std::abs(std::abs(f1.r(0, 0)) - 2.0) < 1e-15);
  CHECK(std::abs(std::abs(f1.q(0, 0)) - 1.0) < 1e-15);

  const Matrix a = random_matrix(rng, 6, 2);
  const ThinQr f2 = thin_qr(a);
  CHECK((f2.q * f2.r - a).norm() <= 1e-12 * a.norm());
  CHECK((f2.q.adjoint() * f2.q - Matrix::Identity(2, 2)).norm() <= 1e-13);
  CHECK(std::abs(f2.r(1, 0)) == 0.0);
}

TEST_CASE("thin QR names the dependent column") {
  Matrix a(3, 3);
  a << 1, 2, 0, 0, 0, 1, 1, 2, 0;
  try {
    thin_qr(a);
    FAIL("expected ColumnRankError");
  } catch (const ColumnRankError& e) {
    CHECK(e.column() == 1);
  }
}
