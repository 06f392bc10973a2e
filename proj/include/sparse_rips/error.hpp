#ifndef SPARSE_RIPS_ERROR_HPP
#define SPARSE_RIPS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sparse_rips {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is out of its documented range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : Error(format(what, row, column)), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t row, std::size_t column) {
    std::string msg = what;
    if (row != 0) {
      msg += " at row " + std::to_string(row);
      if (column != 0) msg += ", column " + std::to_string(column);
    }
    return msg;
  }

  std::size_t row_;
  std::size_t column_;
};

/// A filtration violates its structural invariants (e.g. a missing face).
class FiltrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_ERROR_HPP
