#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rnewton {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (polynomials, matrices, vectors, system files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_ = 0;
};

/// Sizes or shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Base of failures that arise from the numbers rather than the input text.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A requested projection rank exceeds the numerical rank available.
class RankDeficiencyError : public NumericalError {
 public:
  RankDeficiencyError(const std::string& what, std::size_t rank)
      : NumericalError(what), rank_(rank) {}

  std::size_t requested_rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

/// Non-finite values appeared during an evaluation or an iteration.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Column-rank failure in thin QR, carrying the offending column.
class ColumnRankError : public NumericalError {
 public:
  ColumnRankError(const std::string& what, std::size_t column)
      : NumericalError(what), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// The structure supplied to an application solver is inconsistent with the data.
class StructureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Depth deflation ran out of levels; carries one line per level.
class DeflationError : public NumericalError {
 public:
  DeflationError(const std::string& what, std::vector<std::string> diagnostics)
      : NumericalError(what), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

}  // namespace rnewton
