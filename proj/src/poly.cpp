#include "rnewton/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <utility>

#include "rnewton/error.hpp"

namespace rnewton {

int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

bool GrlexLess::operator()(const Exponent& a, const Exponent& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

// ---------------------------------------------------------------------------
// SparsePoly

SparsePoly::SparsePoly(std::vector<std::string> variables) : vars_(std::move(variables)) {}

SparsePoly::SparsePoly(std::vector<std::string> variables, Complex constant)
    : vars_(std::move(variables)) {
  add_term(Exponent(vars_.size(), 0), constant);
}

SparsePoly::SparsePoly(std::vector<std::string> variables, TermMap terms)
    : vars_(std::move(variables)) {
  for (auto& [e, c] : terms) {
    if (e.size() != vars_.size()) throw DimensionError("exponent length differs from variable count");
    for (int k : e) {
      if (k < 0) throw DimensionError("negative exponent");
    }
    add_term(e, c);
  }
}

SparsePoly SparsePoly::variable(const std::vector<std::string>& variables, std::size_t index) {
  if (index >= variables.size()) throw DimensionError("variable index out of range");
  Exponent e(variables.size(), 0);
  e[index] = 1;
  return monomial(variables, std::move(e));
}

SparsePoly SparsePoly::monomial(const std::vector<std::string>& variables, Exponent exponent,
                                Complex coefficient) {
  SparsePoly p(variables);
  if (exponent.size() != variables.size()) {
    throw DimensionError("exponent length differs from variable count");
  }
  p.add_term(exponent, coefficient);
  return p;
}

void SparsePoly::add_term(const Exponent& e, Complex c) {
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

Complex SparsePoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

int SparsePoly::degree() const {
  if (terms_.empty()) return -1;
  return total_degree(terms_.rbegin()->first);
}

int SparsePoly::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

double SparsePoly::norm() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += std::norm(c);
  return std::sqrt(s);
}

SparsePoly SparsePoly::with_variables(const std::vector<std::string>& variables) const {
  if (variables == vars_) return *this;
  std::vector<std::ptrdiff_t> where(vars_.size(), -1);
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(variables.begin(), variables.end(), vars_[i]);
    if (it != variables.end()) where[i] = it - variables.begin();
  }
  SparsePoly out(variables);
  for (const auto& [e, c] : terms_) {
    Exponent ne(variables.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (where[i] < 0) throw DimensionError("variable '" + vars_[i] + "' is not in the target list");
      ne[static_cast<std::size_t>(where[i])] = e[i];
    }
    out.add_term(ne, c);
  }
  return out;
}

void SparsePoly::align_with(const SparsePoly& other) {
  if (vars_ != other.vars_) *this = with_variables(merge_variables(vars_, other.vars_));
}

SparsePoly SparsePoly::derivative(std::size_t var) const {
  if (var >= vars_.size()) throw DimensionError("variable index out of range");
  SparsePoly out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent ne = e;
    ne[var] -= 1;
    out.add_term(ne, c * static_cast<double>(e[var]));
  }
  return out;
}

Complex SparsePoly::evaluate(std::span<const Complex> point) const { return poly_eval(*this, point); }

SparsePoly SparsePoly::pow(unsigned exponent) const {
  SparsePoly result(vars_, 1.0);
  SparsePoly base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1u;
    if (exponent > 0) base *= base;
  }
  return result;
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& other) {
  align_with(other);
  const SparsePoly rhs = other.vars_ == vars_ ? other : other.with_variables(vars_);
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& other) {
  align_with(other);
  const SparsePoly rhs = other.vars_ == vars_ ? other : other.with_variables(vars_);
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

SparsePoly& SparsePoly::operator*=(const SparsePoly& other) {
  align_with(other);
  const SparsePoly rhs = other.vars_ == vars_ ? other : other.with_variables(vars_);
  SparsePoly out(vars_);
  Exponent e(vars_.size());
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

SparsePoly& SparsePoly::operator*=(Complex scalar) {
  if (scalar == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scalar;
  return *this;
}

bool operator==(const SparsePoly& a, const SparsePoly& b) {
  if (a.vars_ == b.vars_) return a.terms_ == b.terms_;
  const auto vars = merge_variables(a.vars_, b.vars_);
  return a.with_variables(vars).terms_ == b.with_variables(vars).terms_;
}

std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& name : b) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

// ---------------------------------------------------------------------------
// MonomialSupport

MonomialSupport::MonomialSupport(std::vector<std::string> variables, std::vector<Exponent> monomials)
    : vars_(std::move(variables)), monos_(std::move(monomials)) {
  for (std::size_t i = 0; i < monos_.size(); ++i) {
    if (monos_[i].size() != vars_.size()) {
      throw DimensionError("monomial exponent length differs from variable count");
    }
    if (!index_.emplace(monos_[i], i).second) {
      throw DimensionError("monomial support has repeated monomials");
    }
  }
}

MonomialSupport MonomialSupport::of(const SparsePoly& p) {
  std::vector<Exponent> monos;
  monos.reserve(p.num_terms());
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) monos.push_back(it->first);
  return MonomialSupport(p.variables(), std::move(monos));
}

MonomialSupport MonomialSupport::dense(const std::vector<std::string>& variables, int degree) {
  std::vector<Exponent> all;
  Exponent e(variables.size(), 0);
  // Enumerate exponent tuples with total degree <= degree.
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos == e.size()) {
      all.push_back(e);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      e[pos] = k;
      self(self, pos + 1, remaining - k);
    }
    e[pos] = 0;
  };
  rec(rec, 0, degree);
  std::sort(all.begin(), all.end(), [](const Exponent& a, const Exponent& b) { return GrlexLess{}(b, a); });
  return MonomialSupport(variables, std::move(all));
}

std::size_t MonomialSupport::index_of(const Exponent& e) const {
  auto it = index_.find(e);
  return it == index_.end() ? monos_.size() : it->second;
}

Vector MonomialSupport::coefficients(const SparsePoly& p) const {
  const SparsePoly q = p.variables() == vars_ ? p : p.with_variables(vars_);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(monos_.size()));
  for (const auto& [e, c] : q.terms()) {
    const std::size_t k = index_of(e);
    if (k == monos_.size()) {
      throw DimensionError("polynomial has a term outside the monomial support");
    }
    out(static_cast<Eigen::Index>(k)) = c;
  }
  return out;
}

SparsePoly MonomialSupport::polynomial(const Vector& coefficients) const {
  if (static_cast<std::size_t>(coefficients.size()) != monos_.size()) {
    throw DimensionError("coefficient vector length differs from support size");
  }
  SparsePoly::TermMap terms;
  for (std::size_t i = 0; i < monos_.size(); ++i) {
    const Complex c = coefficients(static_cast<Eigen::Index>(i));
    if (c != Complex(0.0)) terms.emplace(monos_[i], c);
  }
  return SparsePoly(vars_, std::move(terms));
}

MonomialSupport MonomialSupport::product(const MonomialSupport& other) const {
  const auto vars = merge_variables(vars_, other.vars_);
  SparsePoly a(vars), b(vars);
  // Products of all-ones polynomials share the support of generic products
  // except for exact cancellation, which cannot happen with positive terms.
  for (const auto& e : monos_) a += SparsePoly::monomial(vars_, e).with_variables(vars);
  for (const auto& e : other.monos_) b += SparsePoly::monomial(other.vars_, e).with_variables(vars);
  return of(a * b);
}

MonomialSupport MonomialSupport::merged(const MonomialSupport& other) const {
  if (other.vars_ != vars_) throw DimensionError("cannot merge supports over different variables");
  std::vector<Exponent> monos = monos_;
  for (const auto& e : other.monos_) {
    if (!contains(e)) monos.push_back(e);
  }
  return MonomialSupport(vars_, std::move(monos));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  SparsePoly parse() {
    skip_ws();
    if (at_end()) fail("empty polynomial");
    SparsePoly p = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("polynomial: " + msg, pos_); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  bool starts_primary() const {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || ident_start(c) || c == '(';
  }

  SparsePoly expr() {
    SparsePoly acc = term();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  SparsePoly term() {
    SparsePoly acc = factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc *= factor();
      } else if (starts_primary()) {
        acc *= factor();
      } else {
        return acc;
      }
    }
  }

  SparsePoly factor() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -factor();
    }
    if (peek() == '+') {
      ++pos_;
      return factor();
    }
    SparsePoly base = primary();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const bool braced = peek() == '{';
      if (braced) ++pos_;
      skip_ws();
      const unsigned k = unsigned_int();
      skip_ws();
      if (braced) {
        if (peek() != '}') fail("expected '}'");
        ++pos_;
      }
      return base.pow(k);
    }
    return base;
  }

  unsigned unsigned_int() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected a nonnegative integer exponent");
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc()) fail("exponent out of range");
    return v;
  }

  SparsePoly primary() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      SparsePoly inner = expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (ident_char(peek())) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it != vars_.end()) return SparsePoly::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
      if (name == "i") return SparsePoly(vars_, Complex(0.0, 1.0));
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    if (at_end()) fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  SparsePoly number() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (pos_ == start + 1 && s_[start] == '.') fail("malformed number");
    if (peek() == 'e' || peek() == 'E') {
      std::size_t look = pos_ + 1;
      if (look < s_.size() && (s_[look] == '+' || s_[look] == '-')) ++look;
      if (look < s_.size() && std::isdigit(static_cast<unsigned char>(s_[look]))) {
        pos_ = look;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    // Imaginary suffix: "2.5i", unless 'i' begins a longer identifier or is a variable.
    if (peek() == 'i' && !ident_char(pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0') &&
        std::find(vars_.begin(), vars_.end(), "i") == vars_.end()) {
      ++pos_;
      return SparsePoly(vars_, Complex(0.0, value));
    }
    return SparsePoly(vars_, Complex(value, 0.0));
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

std::string format_coefficient_magnitude(Complex c, bool& negative) {
  negative = false;
  if (c.imag() == 0.0) {
    negative = std::signbit(c.real());
    return format_real(std::abs(c.real()));
  }
  if (c.real() == 0.0) {
    negative = std::signbit(c.imag());
    return format_real(std::abs(c.imag())) + "i";
  }
  std::string s = "(" + format_real(c.real());
  s += std::signbit(c.imag()) ? "-" : "+";
  s += format_real(std::abs(c.imag())) + "i)";
  return s;
}

}  // namespace

SparsePoly parse_poly(std::string_view text, const std::vector<std::string>& variables) {
  for (const auto& v : variables) {
    if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_')) {
      throw ParseError("invalid variable name '" + v + "'");
    }
  }
  return PolyParser(text, variables).parse();
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_complex(Complex value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.15g%+.15gi", value.real(), value.imag());
  return buf;
}

std::string format_poly(const SparsePoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    bool negative = false;
    std::string coef = format_coefficient_magnitude(c, negative);
    const bool constant = total_degree(e) == 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += p.variables()[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (constant) {
      out += coef;
    } else if (coef == "1") {
      out += mono;
    } else {
      out += coef + "*" + mono;
    }
  }
  return out;
}

SparsePoly poly_arith(PolyOp op, std::span<const SparsePoly> operands) {
  if (operands.empty()) return SparsePoly();
  SparsePoly acc = operands[0];
  for (std::size_t i = 1; i < operands.size(); ++i) {
    switch (op) {
      case PolyOp::add: acc += operands[i]; break;
      case PolyOp::sub: acc -= operands[i]; break;
      case PolyOp::mul: acc *= operands[i]; break;
    }
  }
  return acc;
}

Complex poly_eval(const SparsePoly& p, std::span<const Complex> point) {
  if (point.size() != p.num_variables()) {
    throw DimensionError("evaluation point has " + std::to_string(point.size()) +
                         " coordinates, polynomial has " + std::to_string(p.num_variables()) +
                         " variables");
  }
  std::vector<Complex> values;
  values.reserve(p.num_terms());
  for (const auto& [e, c] : p.terms()) {
    Complex v = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) v *= point[i];
    }
    values.push_back(v);
  }
  std::sort(values.begin(), values.end(),
            [](const Complex& a, const Complex& b) { return std::abs(a) < std::abs(b); });
  Complex sum = 0.0;
  for (const Complex& v : values) sum += v;
  return sum;
}

Vector univariate_coefficients(const SparsePoly& p) {
  if (p.num_variables() != 1) throw DimensionError("expected a univariate polynomial");
  const int d = p.degree();
  Vector out = Vector::Zero(std::max(d, 0) + 1);
  for (const auto& [e, c] : p.terms()) out(e[0]) = c;
  return out;
}

SparsePoly univariate_poly(const Vector& ascending, const std::string& variable) {
  SparsePoly::TermMap terms;
  for (Eigen::Index k = 0; k < ascending.size(); ++k) {
    if (ascending(k) != Complex(0.0)) terms.emplace(Exponent{static_cast<int>(k)}, ascending(k));
  }
  return SparsePoly({variable}, std::move(terms));
}

}  // namespace rnewton
