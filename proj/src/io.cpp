#include "rnewton/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "rnewton/error.hpp"
#include "rnewton/poly.hpp"

namespace rnewton {

namespace {

std::vector<std::string> split_entries(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ';') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const SparsePoly p = parse_poly(text, {});
  if (p.terms().size() > 1) throw ParseError("'" + std::string(text) + "' is not a number");
  return p.coefficient(Exponent{});
}

Vector parse_vector(std::string_view text) {
  const auto entries = split_entries(text);
  if (entries.empty()) throw ParseError("empty vector");
  Vector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    try {
      v(static_cast<Eigen::Index>(i)) = parse_complex(entries[i]);
    } catch (const ParseError& e) {
      throw ParseError("entry " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return v;
}

Matrix parse_matrix(std::string_view text) {
  std::vector<std::vector<Complex>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto entries = split_entries(line);
    std::vector<Complex> row;
    for (const auto& e : entries) {
      try {
        row.push_back(parse_complex(e));
      } catch (const ParseError& err) {
        throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(lineno) + ": row has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Matrix read_matrix_file(const std::string& path) { return parse_matrix(read_text_file(path)); }

}  // namespace rnewton
