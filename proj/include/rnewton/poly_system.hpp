#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rnewton/mapping.hpp"
#include "rnewton/poly.hpp"

namespace rnewton {

/// A square or rectangular polynomial system over named variables.
struct PolySystem {
  std::vector<std::string> variables;
  std::vector<SparsePoly> equations;
};

/// Mapping C^n -> C^m for the system, with symbolic first and second
/// partial derivatives behind `jacobian` and `jacobian_derivative`.
Mapping poly_system_jacobian(const std::vector<SparsePoly>& system,
                             const std::vector<std::string>& variables);
inline Mapping poly_system_jacobian(const PolySystem& s) {
  return poly_system_jacobian(s.equations, s.variables);
}

/// System text: the first non-comment line lists the variables (separated
/// by whitespace or commas), each further line holds one polynomial.
/// Lines starting with '#' and blank lines are skipped.
PolySystem parse_system(std::string_view text);
PolySystem read_system_file(const std::string& path);

}  // namespace rnewton
