#pragma once

#include <stdexcept>
#include <string>

namespace fusionclust {

/// Input data that cannot form a SortedSample (empty, non-finite, ...).
class InvalidSampleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The operation is defined only for some component kinds.
class UnsupportedKindError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No root of the balance function exists below the supplied bracket.
class NoBalanceError : public std::runtime_error {
 public:
  NoBalanceError(const std::string& what, double left, double hint)
      : std::runtime_error(what), left_(left), hint_(hint) {}

  double left() const noexcept { return left_; }
  double hint() const noexcept { return hint_; }

 private:
  double left_;
  double hint_;
};

/// Iterative numerics did not converge; carries the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_left, double last_right)
      : std::runtime_error(what), last_left_(last_left), last_right_(last_right) {}

  double last_left() const noexcept { return last_left_; }
  double last_right() const noexcept { return last_right_; }

 private:
  double last_left_;
  double last_right_;
};

/// Malformed textual input (CSV rows, mixture strings, configs).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}

  /// 1-based line number, 0 when not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fusionclust
