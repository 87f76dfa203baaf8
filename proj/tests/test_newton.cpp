#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "rnewton/error.hpp"
#include "rnewton/newton.hpp"
#include "rnewton/poly_system.hpp"
#include "test_support.hpp"

using namespace rnewton;
using namespace rnewton::testing;

namespace {

Mapping affine_mapping(const Matrix& a, const Vector& b) {
  Mapping f;
  f.domain = VectorSpaceLayout::coordinates(a.cols());
  f.codomain = VectorSpaceLayout::coordinates(a.rows());
  f.eval = [a, b](const Vector& x) { return Vector(a * x - b); };
  f.jacobian = [a](const Vector&) { return a; };
  return f;
}

Vector vec(std::initializer_list<Complex> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex c : v) out(i++) = c;
  return out;
}

}  // namespace

TEST_CASE("Newton is exact on nonsingular linear maps") {
  std::mt19937_64 rng(51);
  const Matrix a = random_matrix(rng, 4, 4);
  const Vector b = random_vector(rng, 4);
  NewtonOptions opts;
  opts.rank = 4;
  const IterationTrace t = rank_r_newton(affine_mapping(a, b), Vector::Zero(4), opts);
  CHECK(t.status == NewtonStatus::converged_zero);
  CHECK(t.steps() == 1);
  CHECK((t.final_point - a.lu().solve(b)).norm() <= 1e-12 * b.norm());
}

TEST_CASE("rank-1 Newton on the rounded sphere system reaches the reference stationary point") {
  const Mapping f = poly_system_jacobian(read_system_file(std::string(RNEWTON_DATA_DIR) + "/sphere.sys"));
  NewtonOptions opts;
  opts.rank = 1;
  const IterationTrace t = rank_r_newton(f, vec({-0.25518, -0.60376, -0.020624}), opts);
  CHECK(t.status == NewtonStatus::converged_stationary);
  const Vector ref = vec({-0.234036969240715, -0.544684891672585, -0.020211408075956});
  CHECK((t.final_point - ref).norm() <= 1e-9);
  CHECK(t.final_residual() == doctest::Approx(6.93e-8).epsilon(5e-3));
  CHECK(*std::min_element(t.shifts.begin(), t.shifts.end()) < 1e-15);
  // The reference columns are max-norms; ours are 2-norms, which agree to
  // the quoted digits except where the two norms differ (step 3, shifts).
  CHECK(format_trace_line(0, t.residuals[0], std::nullopt) == "Step    0:  residual =  3.59e-01");
  const double reference_residuals[] = {3.59e-1, 4.67e-2, 1.25e-3, 9.74e-7, 6.93e-8, 6.93e-8, 6.93e-8};
  const double reference_shifts[] = {4.99e-2, 8.88e-3, 2.51e-4, 1.96e-7};
  REQUIRE(t.residuals.size() >= 7);
  for (std::size_t j = 0; j < 7; ++j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%9.2e", t.residuals[j]);
    char ref[32];
    std::snprintf(ref, sizeof ref, "%9.2e", reference_residuals[j]);
    if (j == 3) {
      // max-norm 9.740e-07, 2-norm 9.759e-07.
      CHECK(t.residuals[j] == doctest::Approx(reference_residuals[j]).epsilon(1e-2));
    } else {
      CHECK(std::string(buf) == std::string(ref));
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(t.shifts[j] >= 0.995 * reference_shifts[j]);
    CHECK(t.shifts[j] <= std::sqrt(3.0) * 1.005 * reference_shifts[j]);
  }
}

TEST_CASE("underdetermined circle converges to the nearest point") {
  const Mapping f = poly_system_jacobian({parse_poly("x^2+y^2-1", {"x", "y"})}, {"x", "y"});
  NewtonOptions opts;
  opts.rank = 1;
  const Vector x0 = vec({2.0, 0.0});
  const IterationTrace t = rank_r_newton(f, x0, opts);
  CHECK(t.converged());
  CHECK((t.final_point - x0 / x0.norm()).norm() < 1e-12);

  // Off-axis start: the limit is close to, but not exactly, x0/|x0|.
  const Vector x1 = vec({1.1, 0.3});
  const IterationTrace t1 = rank_r_newton(f, x1, opts);
  CHECK(std::abs(t1.final_point.norm() - 1.0) < 1e-14);
  CHECK((t1.final_point - x1 / x1.norm()).norm() < 1e-2);
}

TEST_CASE("condition estimate is the reciprocal of sigma_r") {
  std::mt19937_64 rng(53);
  RealVector sigma(3);
  sigma << 4.0, 2.0, 1.0;
  const Matrix a = matrix_with_singular_values(rng, 3, 3, sigma);
  const Mapping f = affine_mapping(a, Vector::Zero(3));
  CHECK(condition_estimate(f, Vector::Zero(3), 2) == doctest::Approx(0.5).epsilon(1e-13));
  const Mapping g = affine_mapping(Matrix::Zero(2, 2), Vector::Zero(2));
  CHECK_THROWS_AS(condition_estimate(g, Vector::Zero(2), 1), RankDeficiencyError);
}

TEST_CASE("stationary point property on perturbed data") {
  // Underlying zero set is the unit sphere; both equations share its gradient.
  const std::vector<std::string> v{"x", "y", "z"};
  const SparsePoly sphere = parse_poly("x^2+y^2+z^2-1", v);
  const SparsePoly noise1 = parse_poly("0.3*x - 0.7*z + 0.2", v);
  const SparsePoly noise2 = parse_poly("-0.5*y + 0.9", v);
  auto solve = [&](double eps) {
    const std::vector<SparsePoly> sys{sphere * parse_poly("x+2", v) + eps * noise1,
                                      sphere * parse_poly("y-3", v) + eps * noise2};
    const Mapping f = poly_system_jacobian(sys, v);
    NewtonOptions opts;
    opts.rank = 1;
    opts.shift_tol = 1e-13;
    const IterationTrace t = rank_r_newton(f, vec({0.5, 0.6, 0.7}), opts);
    REQUIRE(t.status == NewtonStatus::converged_stationary);
    // J_r^+ f vanishes at the limit although f does not.
    const RankRProjection p = rank_r_project(f.jacobian_at(t.final_point), 1);
    CHECK(p.pinv_apply(f(t.final_point)).norm() <= 1e-13);
    CHECK(t.final_residual() > 1e3 * 1e-13);
    return std::abs(t.final_point.norm() - 1.0) / eps;
  };
  const double r4 = solve(1e-4);
  const double r6 = solve(1e-6);
  const double r8 = solve(1e-8);
  const double lo = std::min({r4, r6, r8});
  const double hi = std::max({r4, r6, r8});
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 10.0);
}

TEST_CASE("full-rank engine matches a plain Newton implementation step by step") {
  const std::vector<std::string> v{"x", "y"};
  const std::vector<SparsePoly> sys{parse_poly("x^2 + y^2 - 4", v), parse_poly("x*y - 1", v)};
  const Mapping f = poly_system_jacobian(sys, v);
  const Vector x0 = vec({2.0, 0.3});
  Vector x = x0;
  std::vector<Vector> plain{x};
  for (int k = 0; k < 6; ++k) {
    x = x - f.jacobian_at(x).partialPivLu().solve(f(x));
    plain.push_back(x);
  }
  for (std::size_t steps = 1; steps <= 6; ++steps) {
    NewtonOptions opts;
    opts.rank = 2;
    opts.max_steps = steps;
    opts.residual_tol = 1e-300;
    const IterationTrace t = rank_r_newton(f, x0, opts);
    CHECK((t.final_point - plain[steps]).norm() <= 1e-12 * plain[steps].norm());
  }
}

TEST_CASE("rank deficiency and divergence are reported") {
  const Mapping zero = affine_mapping(Matrix::Zero(2, 2), Vector::Ones(2));
  NewtonOptions opts;
  opts.rank = 1;
  try {
    rank_r_newton(zero, Vector::Zero(2), opts);
    FAIL("expected RankDeficiencyError");
  } catch (const RankDeficiencyError& e) {
    CHECK(std::string(e.what()).find("step 0") != std::string::npos);
  }
  opts.rank = 3;
  CHECK_THROWS_AS(rank_r_newton(zero, Vector::Zero(2), opts), RankDeficiencyError);

  Mapping blowup;
  blowup.domain = VectorSpaceLayout::coordinates(1);
  blowup.codomain = VectorSpaceLayout::coordinates(1);
  blowup.eval = [](const Vector& x) { return Vector(Vector::Constant(1, 1.0 / (x(0) - 1.0))); };
  blowup.jacobian = [](const Vector& x) {
    return Matrix(Matrix::Constant(1, 1, -1.0 / ((x(0) - 1.0) * (x(0) - 1.0))));
  };
  opts.rank = 1;
  CHECK_THROWS_AS(rank_r_newton(blowup, vec({1.0}), opts), DivergenceError);
}

TEST_CASE("max-steps status and streamed trace") {
  const Mapping f = poly_system_jacobian({parse_poly("x^2", {"x"})}, {"x"});
  std::ostringstream out;
  NewtonOptions opts;
  opts.rank = 1;
  opts.max_steps = 3;
  opts.trace = &out;
  const IterationTrace t = rank_r_newton(f, vec({1.0}), opts);
  CHECK(t.status == NewtonStatus::max_steps);
  CHECK(out.str() == format_trace(t));
  CHECK(out.str() ==
        "Step    0:  residual =  1.00e+00\n"
        "Step    1:  residual =  2.50e-01    shift =  5.00e-01\n"
        "Step    2:  residual =  6.25e-02    shift =  2.50e-01\n"
        "Step    3:  residual =  1.56e-02    shift =  1.25e-01\n");
}

TEST_CASE("quadratic ratio diagnostic") {
  CHECK(quadratic_ratio({1e-1, 1e-2, 1e-4, 1e-8, 1e-17}, 3, 1e-12) == doctest::Approx(1.0));
  CHECK(quadratic_ratio({1e-2, 9e-3, 8e-3}, 3, 1e-12) > 10.0);
  CHECK(quadratic_ratio({1e-16}, 3, 1e-12) == 0.0);
}
