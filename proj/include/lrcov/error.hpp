#pragma once

#include <stdexcept>
#include <string>

namespace lrcov {

/// Base class of every error raised by the library. `exit_code()` is the
/// process status the command-line tool reports for this error class.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Invalid configuration: bandwidths, thresholds, plans, lengths.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Invalid input data (non-finite values, mismatched shapes).
class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Malformed input file. Carries the 1-based location of the offending cell.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : InputError(what + " (row " + std::to_string(row) + ", column " +
                   std::to_string(column) + ")"),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Numerical failure: non-convergence, failed factorization.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, double last_estimate = 0.0)
      : Error(what), last_estimate_(last_estimate) {}
  int exit_code() const noexcept override { return 4; }
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

}  // namespace lrcov
