#include "rnewton/factor.hpp"

#include <cmath>
#include <string>

#include "rnewton/error.hpp"

namespace rnewton {

namespace {

void validate_structure(const FactorStructure& s) {
  if (s.exponents.empty()) throw DimensionError("factor structure needs at least one factor");
  if (s.exponents.size() != s.hosting.size()) {
    throw DimensionError("factor structure has " + std::to_string(s.exponents.size()) + " exponents but " +
                         std::to_string(s.hosting.size()) + " hosting spaces");
  }
  for (std::size_t j = 0; j < s.exponents.size(); ++j) {
    if (s.exponents[j] < 1) throw DimensionError("factor exponents must be positive");
    if (s.hosting[j].size() == 0) throw DimensionError("hosting space " + std::to_string(j + 1) + " is empty");
    if (s.hosting[j].variables() != s.hosting.front().variables()) {
      throw DimensionError("hosting spaces must share one variable list");
    }
  }
}

}  // namespace

SparsePoly factor_product(const FactorArray& arr, const std::vector<int>& exponents) {
  if (arr.factors.size() != exponents.size()) throw DimensionError("factor count does not match exponents");
  if (arr.factors.empty()) throw DimensionError("empty factor array");
  SparsePoly out(arr.factors.front().variables(), arr.u0);
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    out *= arr.factors[j].pow(static_cast<unsigned>(exponents[j]));
  }
  return out;
}

FactorArray gauge_normalize(const FactorArray& arr, const std::vector<int>& exponents) {
  if (arr.factors.size() != exponents.size()) throw DimensionError("factor count does not match exponents");
  FactorArray out = arr;
  for (std::size_t j = 0; j < out.factors.size(); ++j) {
    SparsePoly& u = out.factors[j];
    if (u.is_zero()) throw StructureError("factor " + std::to_string(j + 1) + " is zero");
    const Complex lead = u.terms().rbegin()->second;
    const Complex c = std::conj(lead) / (std::abs(lead) * u.norm());
    u *= c;
    out.u0 *= std::pow(c, -exponents[j]);
  }
  return out;
}

void check_proper_hosting(const MonomialSupport& hosting, const SparsePoly& factor_in) {
  const SparsePoly factor = factor_in.with_variables(hosting.variables());
  if (factor.is_zero()) throw StructureError("factor is zero");
  const std::size_t nv = hosting.variables().size();
  const Exponent& t0 = factor.terms().begin()->first;
  // Any shift a with x^a * factor inside the space maps t0 to some monomial e.
  for (const Exponent& e : hosting.monomials()) {
    Exponent a(nv);
    bool valid = true;
    bool nonzero = false;
    for (std::size_t i = 0; i < nv; ++i) {
      a[i] = e[i] - t0[i];
      if (a[i] < 0) valid = false;
      if (a[i] != 0) nonzero = true;
    }
    if (!valid || !nonzero) continue;
    bool inside = true;
    for (const auto& [t, c] : factor.terms()) {
      Exponent shifted(nv);
      for (std::size_t i = 0; i < nv; ++i) shifted[i] = t[i] + a[i];
      if (!hosting.contains(shifted)) {
        inside = false;
        break;
      }
    }
    if (inside) {
      throw StructureError("hosting space is not proper for " + format_poly(factor_in) + ": it also contains " +
                           format_poly(SparsePoly::monomial(hosting.variables(), a) * factor));
    }
  }
}

Mapping factor_mapping(const SparsePoly& p_in, const FactorStructure& s) {
  validate_structure(s);
  const auto& vars = s.hosting.front().variables();
  const SparsePoly p = p_in.with_variables(vars);
  MonomialSupport prod = MonomialSupport::dense(vars, 0);
  for (std::size_t j = 0; j < s.hosting.size(); ++j) {
    for (int l = 0; l < s.exponents[j]; ++l) prod = prod.product(s.hosting[j]);
  }
  const MonomialSupport codomain_support = prod.merged(MonomialSupport::of(p));

  std::vector<LayoutComponent> dom{VectorSpaceLayout::scalar()};
  for (const auto& h : s.hosting) dom.push_back(VectorSpaceLayout::polynomial(h));
  const std::vector<int> ell = s.exponents;
  const std::size_t k = ell.size();

  auto eval = [p, ell, k, vars](const Point& x) {
    FactorArray arr;
    arr.u0 = std::get<Complex>(x.parts[0]);
    for (std::size_t j = 0; j < k; ++j) arr.factors.push_back(std::get<SparsePoly>(x.parts[j + 1]));
    return Point{{factor_product(arr, ell) - p}};
  };
  auto derivative = [ell, k, vars](const Point& x, const Point& dx) {
    const Complex u0 = std::get<Complex>(x.parts[0]);
    const Complex du0 = std::get<Complex>(dx.parts[0]);
    std::vector<SparsePoly> powers;  // uj^(lj - 1)
    SparsePoly all(vars, 1.0);       // prod uj^lj
    for (std::size_t j = 0; j < k; ++j) {
      const auto& u = std::get<SparsePoly>(x.parts[j + 1]);
      powers.push_back(u.pow(static_cast<unsigned>(ell[j] - 1)));
      all *= powers.back() * u;
    }
    SparsePoly out = all * du0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto& du = std::get<SparsePoly>(dx.parts[j + 1]);
      if (du.is_zero()) continue;
      SparsePoly term = du * powers[j] * (u0 * static_cast<double>(ell[j]));
      for (std::size_t i = 0; i < k; ++i) {
        if (i != j) term *= powers[i] * std::get<SparsePoly>(x.parts[i + 1]);
      }
      out += term;
    }
    return Point{{out}};
  };
  return make_structured_mapping(VectorSpaceLayout(std::move(dom)),
                                 VectorSpaceLayout({VectorSpaceLayout::polynomial(codomain_support)}), eval,
                                 derivative);
}

FactorResult factor_refine(const SparsePoly& p, const FactorStructure& s, const FactorArray& initial,
                           const FactorOptions& opts) {
  validate_structure(s);
  if (initial.factors.size() != s.factor_count()) {
    throw DimensionError("initial array has " + std::to_string(initial.factors.size()) + " factors, structure has " +
                         std::to_string(s.factor_count()));
  }
  const auto& vars = s.hosting.front().variables();
  Point x0;
  x0.parts.emplace_back(initial.u0);
  for (std::size_t j = 0; j < s.factor_count(); ++j) {
    const SparsePoly u = initial.factors[j].with_variables(vars);
    for (const auto& [e, c] : u.terms()) {
      if (!s.hosting[j].contains(e)) {
        throw StructureError("initial factor " + std::to_string(j + 1) + " has a term outside its hosting space");
      }
    }
    check_proper_hosting(s.hosting[j], u);
    x0.parts.emplace_back(u);
  }

  const Mapping f = factor_mapping(p, s);
  NewtonOptions nopts;
  nopts.rank = f.domain.total_dim() - s.factor_count();
  nopts.max_steps = opts.max_steps;
  nopts.trace = opts.trace;
  FactorResult out;
  out.trace = rank_r_newton(f, f.domain.embed(x0), nopts);

  const Point x = f.domain.extract(out.trace.final_point);
  FactorArray arr;
  arr.u0 = std::get<Complex>(x.parts[0]);
  for (std::size_t j = 0; j < s.factor_count(); ++j) arr.factors.push_back(std::get<SparsePoly>(x.parts[j + 1]));
  arr = gauge_normalize(arr, s.exponents);

  Point xn;
  xn.parts.emplace_back(arr.u0);
  for (const auto& u : arr.factors) xn.parts.emplace_back(u);
  const Vector xv = f.domain.embed(xn);
  arr.residual = f(xv).norm();
  arr.condition = out.trace.condition;
  out.array = std::move(arr);
  return out;
}

}  // namespace rnewton
