#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orthoreg {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Power iteration collapsed to the zero vector; callers treat sigma as 0.
class ZeroIterate : public Error {
 public:
  using Error::Error;
};

class ZeroColumn : public Error {
 public:
  ZeroColumn(std::size_t column)
      : Error("column " + std::to_string(column) + " has zero norm"), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Subset enumeration hit the work cap. Carries the best lower bound found,
/// which is exact for every cardinality up to completed_k().
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(double partial, int completed_k, std::size_t requested)
      : Error("RIP enumeration budget exceeded: " + std::to_string(requested) +
              " subsets requested; exact only up to k=" + std::to_string(completed_k)),
        partial_(partial),
        completed_k_(completed_k) {}
  double partial_value() const noexcept { return partial_; }
  int completed_k() const noexcept { return completed_k_; }

 private:
  double partial_;
  int completed_k_;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : Error(what + " at row " + std::to_string(row) + ", column " + std::to_string(column)),
        row_(row),
        column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class LabelRange : public Error {
 public:
  using Error::Error;
};

class TooFewExamples : public Error {
 public:
  using Error::Error;
};

class CenterPlacementFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace orthoreg
