#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rnewton/error.hpp"
#include "rnewton/factor.hpp"
#include "test_support.hpp"

using namespace rnewton;
using namespace rnewton::testing;

namespace {

const std::vector<std::string> kXyz{"x", "y", "z"};
const std::vector<std::string> kXy{"x", "y"};

SparsePoly read_data_poly() {
  std::ifstream in(std::string(RNEWTON_DATA_DIR) + "/factor_data.txt");
  std::string line, body;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') body += line + " ";
  }
  return parse_poly(body, kXyz);
}

MonomialSupport support(const std::vector<std::string>& vars, std::initializer_list<const char*> monos) {
  std::vector<Exponent> es;
  for (const char* m : monos) es.push_back(parse_poly(m, vars).terms().begin()->first);
  return MonomialSupport(vars, es);
}

double array_distance(const FactorArray& a, const FactorArray& b) {
  double s = std::norm(a.u0 - b.u0);
  for (std::size_t j = 0; j < a.factors.size(); ++j) s += std::pow((a.factors[j] - b.factors[j]).norm(), 2);
  return std::sqrt(s);
}

double max_coefficient_error(const FactorArray& a, const FactorArray& b) {
  double worst = std::abs(a.u0 - b.u0);
  for (std::size_t j = 0; j < a.factors.size(); ++j) {
    const SparsePoly d = a.factors[j] - b.factors[j];
    for (const auto& [e, c] : d.terms()) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

FactorStructure example_structure() {
  return {{3, 2}, {support(kXyz, {"y^3", "x^2*z^4"}), support(kXyz, {"1", "y*z", "x^5"})}};
}

FactorArray example_exact() {
  FactorArray a;
  a.u0 = 1.0;
  a.factors = {SparsePoly::monomial(kXyz, {0, 3, 0}, 2.0 / 3.0) + SparsePoly::monomial(kXyz, {2, 0, 4}, 6.0 / 7.0),
               SparsePoly(kXyz, -1.0) + SparsePoly::monomial(kXyz, {0, 1, 1}, 5.0 / 11.0) +
                   SparsePoly::monomial(kXyz, {5, 0, 0}, std::sqrt(3.0))};
  return a;
}

}  // namespace

TEST_CASE("gauge normalization") {
  FactorArray a;
  a.u0 = 3.0;
  a.factors = {parse_poly("x + y", kXy), parse_poly("x - 2y + 1", kXy)};
  const std::vector<int> ell{3, 2};
  const FactorArray n = gauge_normalize(a, ell);
  CHECK(std::abs(n.factors[0].norm() - 1.0) < 1e-15);
  CHECK(std::abs(n.factors[1].norm() - 1.0) < 1e-15);
  CHECK((factor_product(n, ell) - factor_product(a, ell)).norm() <= 1e-14 * factor_product(a, ell).norm());
  const FactorArray again = gauge_normalize(n, ell);
  CHECK(array_distance(again, n) < 1e-13);

  // Scaling u1 by 2 with l1 = 3 is compensated by u0 / 8.
  FactorArray doubled = n;
  doubled.factors[0] *= 2.0;
  doubled.u0 /= 8.0;
  CHECK((factor_product(doubled, ell) - factor_product(n, ell)).norm() < 1e-13);
  CHECK(array_distance(gauge_normalize(doubled, ell), n) < 1e-13);

  std::mt19937_64 rng(127);
  const MonomialSupport linear = MonomialSupport::dense(kXy, 1);
  for (int trial = 0; trial < 10; ++trial) {
    FactorArray r;
    r.u0 = random_complex(rng);
    for (int j = 0; j < 2; ++j) {
      SparsePoly u(kXy);
      for (const auto& e : linear.monomials()) u += SparsePoly::monomial(kXy, e, random_complex(rng));
      r.factors.push_back(u);
    }
    const SparsePoly before = factor_product(r, ell);
    CHECK((factor_product(gauge_normalize(r, ell), ell) - before).norm() <= 1e-14 * before.norm());
  }

  FactorArray zero = a;
  zero.factors[1] = SparsePoly(kXy);
  CHECK_THROWS_AS(gauge_normalize(zero, ell), StructureError);
}

TEST_CASE("proper hosting spaces") {
  CHECK_NOTHROW(check_proper_hosting(MonomialSupport::dense(kXy, 1), parse_poly("x + y", kXy)));
  CHECK_NOTHROW(check_proper_hosting(support(kXyz, {"1", "y*z", "x^5"}), parse_poly("1 + y*z + x^5", kXyz)));
  CHECK_THROWS_AS(check_proper_hosting(MonomialSupport::dense(kXy, 2), parse_poly("x + y", kXy)), StructureError);
  CHECK_THROWS_AS(check_proper_hosting(support(kXy, {"x", "x^2", "y"}), parse_poly("x", kXy)), StructureError);
}

TEST_CASE("exact data and exact factors") {
  const FactorStructure s{{2, 1}, {MonomialSupport::dense(kXy, 1), MonomialSupport::dense(kXy, 1)}};
  FactorArray a;
  a.u0 = 2.0;
  a.factors = {parse_poly("x + y", kXy), parse_poly("x - y", kXy)};
  const FactorResult r = factor_refine(factor_product(a, s.exponents), s, a);
  CHECK(r.trace.status == NewtonStatus::converged_zero);
  CHECK(r.trace.steps() == 0);
  CHECK(r.array.residual <= 1e-12);
}

TEST_CASE("structure validation") {
  const SparsePoly p = parse_poly("(x+y)^2*(x-y)", kXy);
  const FactorStructure s{{2, 1}, {MonomialSupport::dense(kXy, 1), MonomialSupport::dense(kXy, 1)}};
  FactorArray a;
  a.factors = {parse_poly("x + y + x^2", kXy), parse_poly("x - y", kXy)};
  CHECK_THROWS_AS(factor_refine(p, s, a), StructureError);
  a.factors = {parse_poly("x + y", kXy)};
  CHECK_THROWS_AS(factor_refine(p, s, a), DimensionError);
  const FactorStructure bad{{0, 1}, s.hosting};
  CHECK_THROWS_AS(factor_mapping(p, bad), DimensionError);
}

TEST_CASE("six-digit data factorization") {
  const SparsePoly p = read_data_poly();
  const FactorStructure s = example_structure();
  FactorArray init;
  init.u0 = 1.0;
  init.factors = {parse_poly(".67*y^3+.86*x^2*z^4", kXyz), parse_poly("-1+.45*y*z+1.73*x^5", kXyz)};
  const FactorResult r = factor_refine(p, s, init);
  CHECK(r.trace.rank == 4);
  CHECK(r.trace.status == NewtonStatus::converged_stationary);
  CHECK(r.trace.shifts.back() <= 1e-13);
  // Reference plateau 7.86e-6 is the max-norm of the residual.
  CHECK(r.trace.final_residual() == doctest::Approx(1.28e-5).epsilon(0.01));
  const FactorArray exact = gauge_normalize(example_exact(), s.exponents);
  CHECK(max_coefficient_error(r.array, exact) <= 2e-5);
  // The iteration lands on the reference array before normalization.
  const Vector& z = r.trace.final_point;
  CHECK(std::abs(z(0) - 0.999035) < 1e-6);
  CHECK(std::abs(z(1) - 0.667678) < 1e-6);
  CHECK(std::abs(z(2) - 0.858444) < 1e-6);
  CHECK(std::abs(z(3) + 0.998210) < 1e-6);
  CHECK(std::abs(z(4) - 0.453732) < 1e-6);
  CHECK(std::abs(z(5) - 1.7289489) < 1e-6);
  CHECK(r.trace.relative_condition == doctest::Approx(4.92).epsilon(5e-3));
  CHECK(r.array.condition == doctest::Approx(0.158).epsilon(1e-2));
}

TEST_CASE("gauge-shifted starts land on the same normalized array") {
  const SparsePoly p = read_data_poly();
  const FactorStructure s = example_structure();
  FactorArray init;
  init.u0 = 1.0;
  init.factors = {parse_poly(".67*y^3+.86*x^2*z^4", kXyz), parse_poly("-1+.45*y*z+1.73*x^5", kXyz)};
  const FactorResult a = factor_refine(p, s, init);
  FactorArray shifted = init;
  const Complex t1(1.3, 0.4), t2(0.7, -0.2);
  shifted.factors[0] *= t1;
  shifted.factors[1] *= t2;
  shifted.u0 = std::pow(t1, -3) * std::pow(t2, -2);
  const FactorResult b = factor_refine(p, s, shifted);
  CHECK(array_distance(a.array, b.array) < 1e-8);
}

TEST_CASE("noisy dense factorization and error scaling") {
  const FactorStructure s{{2, 1}, {MonomialSupport::dense(kXy, 1), MonomialSupport::dense(kXy, 1)}};
  FactorArray exact;
  exact.u0 = 1.0;
  exact.factors = {parse_poly("x + y", kXy), parse_poly("x - y", kXy)};
  const SparsePoly p = factor_product(exact, s.exponents);
  const FactorArray exact_n = gauge_normalize(exact, s.exponents);
  const MonomialSupport p3 = MonomialSupport::dense(kXy, 3);
  std::vector<double> ratios;
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    std::mt19937_64 rng(131);
    Vector noise = random_vector(rng, static_cast<Eigen::Index>(p3.size()));
    noise *= eps / noise.norm();
    const SparsePoly pt = p + p3.polynomial(noise);
    FactorArray init = exact;
    init.factors[0] += parse_poly("0.01*x - 0.02", kXy);
    init.factors[1] += parse_poly("0.015*y + 0.01", kXy);
    const FactorResult r = factor_refine(pt, s, init);
    REQUIRE(r.trace.converged());
    const double err = array_distance(r.array, exact_n);
    if (eps == 1e-8) CHECK(err < 1e-7);
    ratios.push_back(err / eps);
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 10.0);
}

TEST_CASE("Jacobian nullity equals the factor count on exact data") {
  const FactorStructure s = example_structure();
  const FactorArray e = gauge_normalize(example_exact(), s.exponents);
  const Mapping f = factor_mapping(factor_product(e, s.exponents), s);
  const Vector x = f.domain.embed(Point{{e.u0, e.factors[0], e.factors[1]}});
  const SvdFactors d = svd(f.jacobian_at(x));
  const double tol = 1e-8 * d.sigma(0);
  const std::size_t small = static_cast<std::size_t>((d.sigma.array() <= tol).count());
  CHECK(small == s.factor_count());
  CHECK(fd_jacobian_check(f, x, 1e-6) <= 1e-7);

  std::mt19937_64 rng(137);
  const Vector y = random_vector(rng, static_cast<Eigen::Index>(f.domain.total_dim()));
  CHECK(fd_jacobian_check(f, y, 1e-6) <= 1e-7);
}

TEST_CASE("quadratic convergence on exact data") {
  const FactorStructure s = example_structure();
  const FactorArray e = example_exact();
  const SparsePoly p = factor_product(e, s.exponents);
  FactorArray init = e;
  init.u0 = 1.001;
  init.factors[0] += parse_poly("0.002*y^3 - 0.001*x^2*z^4", kXyz);
  init.factors[1] += parse_poly("0.001 + 0.002*x^5", kXyz);
  const FactorResult r = factor_refine(p, s, init);
  CHECK(r.trace.status == NewtonStatus::converged_zero);
  CHECK(quadratic_ratio(r.trace.shifts, 3, 1e-11) <= 10.0);
}
