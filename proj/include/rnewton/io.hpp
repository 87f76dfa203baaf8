#pragma once

// Text input for numbers, vectors and matrices. Entries use the polynomial
// number syntax: "2", "-1.5e-3", "3i", "1-2i", "(0.5+0.25i)".

#include <string>
#include <string_view>

#include "rnewton/linalg.hpp"

namespace rnewton {

Complex parse_complex(std::string_view text);

/// Entries separated by commas and/or whitespace.
Vector parse_vector(std::string_view text);

/// One row per line, entries separated by whitespace or commas. Blank lines
/// and lines starting with '#' are skipped.
Matrix parse_matrix(std::string_view text);

std::string read_text_file(const std::string& path);
Matrix read_matrix_file(const std::string& path);

}  // namespace rnewton
