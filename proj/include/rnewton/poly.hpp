#pragma once

// Sparse multivariate polynomials with complex coefficients.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rnewton/linalg.hpp"

namespace rnewton {

/// Exponent tuple, one entry per declared variable.
using Exponent = std::vector<int>;

int total_degree(const Exponent& e);

/// Graded lexicographic order with the first declared variable most significant.
struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class SparsePoly {
 public:
  using TermMap = std::map<Exponent, Complex, GrlexLess>;

  SparsePoly() = default;
  explicit SparsePoly(std::vector<std::string> variables);
  SparsePoly(std::vector<std::string> variables, Complex constant);
  SparsePoly(std::vector<std::string> variables, TermMap terms);

  /// The polynomial consisting of a single variable.
  static SparsePoly variable(const std::vector<std::string>& variables, std::size_t index);
  static SparsePoly monomial(const std::vector<std::string>& variables, Exponent exponent,
                             Complex coefficient = 1.0);

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t num_variables() const noexcept { return vars_.size(); }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Complex coefficient(const Exponent& e) const;
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  /// Degree in a single variable; -1 for the zero polynomial.
  int degree_in(std::size_t var) const;
  /// 2-norm of the coefficient vector.
  double norm() const;

  /// Same polynomial over a different (super- or re-ordered) variable list.
  /// Throws DimensionError if a variable with a nonzero exponent is dropped.
  SparsePoly with_variables(const std::vector<std::string>& variables) const;

  SparsePoly derivative(std::size_t var) const;
  Complex evaluate(std::span<const Complex> point) const;
  SparsePoly pow(unsigned exponent) const;

  SparsePoly operator-() const;
  SparsePoly& operator+=(const SparsePoly& other);
  SparsePoly& operator-=(const SparsePoly& other);
  SparsePoly& operator*=(const SparsePoly& other);
  SparsePoly& operator*=(Complex scalar);

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(SparsePoly a, const SparsePoly& b) { return a *= b; }
  friend SparsePoly operator*(SparsePoly a, Complex s) { return a *= s; }
  friend SparsePoly operator*(Complex s, SparsePoly a) { return a *= s; }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b);

 private:
  void add_term(const Exponent& e, Complex c);
  void align_with(const SparsePoly& other);

  std::vector<std::string> vars_;
  TermMap terms_;
};

/// Union of two variable lists, keeping the order of `a` then new names of `b`.
std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b);

/// Ordered list of distinct monomials spanning a coefficient space.
class MonomialSupport {
 public:
  MonomialSupport() = default;
  MonomialSupport(std::vector<std::string> variables, std::vector<Exponent> monomials);

  /// Support of `p` in canonical (descending graded lex) order.
  static MonomialSupport of(const SparsePoly& p);
  /// All monomials of total degree <= d in the given variables.
  static MonomialSupport dense(const std::vector<std::string>& variables, int degree);

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  const std::vector<Exponent>& monomials() const noexcept { return monos_; }
  std::size_t size() const noexcept { return monos_.size(); }

  /// Position of a monomial, or size() if absent.
  std::size_t index_of(const Exponent& e) const;
  bool contains(const Exponent& e) const { return index_of(e) < size(); }

  /// Coefficients of `p` in this basis. Throws DimensionError if `p` has a
  /// term outside the support.
  Vector coefficients(const SparsePoly& p) const;
  SparsePoly polynomial(const Vector& coefficients) const;

  /// Support of all products a*b with a, b drawn from the two spaces.
  MonomialSupport product(const MonomialSupport& other) const;
  /// Support union (this order first).
  MonomialSupport merged(const MonomialSupport& other) const;

 private:
  std::vector<std::string> vars_;
  std::vector<Exponent> monos_;
  std::map<Exponent, std::size_t, GrlexLess> index_;
};

/// Parses signed terms with decimal coefficients, '*' or juxtaposition for
/// multiplication, '^' (or '^{n}') for integer powers and parentheses.
/// A bare 'i' that is not a declared variable, or a number suffixed by 'i',
/// is the imaginary unit. Throws ParseError on malformed input.
SparsePoly parse_poly(std::string_view text, const std::vector<std::string>& variables);

/// Canonical text form; parse_poly(format_poly(p), vars) == p.
std::string format_poly(const SparsePoly& p);

enum class PolyOp { add, sub, mul };

/// Left fold of `op` over the operands on the union of their variables.
SparsePoly poly_arith(PolyOp op, std::span<const SparsePoly> operands);

/// Direct accumulation of the term values, smallest magnitudes first.
Complex poly_eval(const SparsePoly& p, std::span<const Complex> point);

/// Shortest round-trip decimal text for a double.
std::string format_real(double value);
/// Complex number as "%.15g%+.15gi".
std::string format_complex(Complex value);

/// Univariate helpers: ascending coefficient vector of length degree+1.
Vector univariate_coefficients(const SparsePoly& p);
SparsePoly univariate_poly(const Vector& ascending, const std::string& variable);

}  // namespace rnewton
