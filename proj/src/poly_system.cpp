#include "rnewton/poly_system.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include "rnewton/error.hpp"

namespace rnewton {

namespace {

struct Derivatives {
  std::vector<SparsePoly> equations;
  std::vector<std::vector<SparsePoly>> first;                // [eq][var]
  std::vector<std::vector<std::vector<SparsePoly>>> second;  // [eq][var][var]
};

std::vector<Complex> to_point(const Vector& x) { return {x.data(), x.data() + x.size()}; }

}  // namespace

Mapping poly_system_jacobian(const std::vector<SparsePoly>& system,
                             const std::vector<std::string>& variables) {
  if (system.empty()) throw DimensionError("polynomial system is empty");
  auto d = std::make_shared<Derivatives>();
  const std::size_t n = variables.size();
  for (const auto& p : system) {
    SparsePoly q = p.with_variables(variables);
    std::vector<SparsePoly> row;
    std::vector<std::vector<SparsePoly>> hess;
    for (std::size_t j = 0; j < n; ++j) {
      row.push_back(q.derivative(j));
      std::vector<SparsePoly> hrow;
      for (std::size_t k = 0; k < n; ++k) hrow.push_back(row.back().derivative(k));
      hess.push_back(std::move(hrow));
    }
    d->equations.push_back(std::move(q));
    d->first.push_back(std::move(row));
    d->second.push_back(std::move(hess));
  }
  const auto m = static_cast<Eigen::Index>(system.size());
  const auto ni = static_cast<Eigen::Index>(n);

  Mapping f;
  f.domain = VectorSpaceLayout::coordinates(ni);
  f.codomain = VectorSpaceLayout::coordinates(m);
  f.eval = [d, m](const Vector& x) {
    const auto pt = to_point(x);
    Vector y(m);
    for (Eigen::Index i = 0; i < m; ++i) y(i) = poly_eval(d->equations[static_cast<std::size_t>(i)], pt);
    return y;
  };
  f.jacobian = [d, m, ni](const Vector& x) {
    const auto pt = to_point(x);
    Matrix j(m, ni);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index k = 0; k < ni; ++k) {
        j(i, k) = poly_eval(d->first[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], pt);
      }
    }
    return j;
  };
  // d/dx (J(x) y): entry (i, k) = sum_l y_l * d^2 f_i / dx_l dx_k
  f.jacobian_derivative = [d, m, ni](const Vector& x, const Vector& y) {
    const auto pt = to_point(x);
    Matrix out = Matrix::Zero(m, ni);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& h = d->second[static_cast<std::size_t>(i)];
      for (Eigen::Index l = 0; l < ni; ++l) {
        if (y(l) == Complex(0.0)) continue;
        for (Eigen::Index k = 0; k < ni; ++k) {
          out(i, k) += y(l) * poly_eval(h[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)], pt);
        }
      }
    }
    return out;
  };
  return f;
}

PolySystem parse_system(std::string_view text) {
  PolySystem sys;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_vars = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!have_vars) {
      for (char& c : line) {
        if (c == ',') c = ' ';
      }
      std::istringstream names(line);
      std::string name;
      while (names >> name) sys.variables.push_back(name);
      have_vars = true;
      continue;
    }
    try {
      sys.equations.push_back(parse_poly(line, sys.variables));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), e.position());
    }
  }
  if (!have_vars || sys.variables.empty()) throw ParseError("system has no variable line");
  if (sys.equations.empty()) throw ParseError("system has no equations");
  return sys;
}

PolySystem read_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open system file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

}  // namespace rnewton
