#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rsint {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (x not in [a, b], c > d, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid construction data (unsorted breakpoints, mismatched sizes, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Invalid structured document; `pointer` locates the offending value.
class DocumentError : public Error {
 public:
  DocumentError(const std::string& what, std::string pointer)
      : Error(what + " at " + (pointer.empty() ? std::string("/") : pointer)),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Evaluation of an integrand failed at a specific abscissa.
class EvalError : public Error {
 public:
  EvalError(const std::string& what, double x)
      : Error(what + " at x = " + std::to_string(x)), x_(x) {}

  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// Requested quadrature tolerance could not be reached within the budget.
class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& what, double best_value, double best_bound)
      : Error(what), best_value_(best_value), best_bound_(best_bound) {}

  double best_value() const noexcept { return best_value_; }
  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_value_;
  double best_bound_;
};

/// No negativity threshold exists for a counterexample construction.
class ThresholdError : public Error {
 public:
  using Error::Error;
};

/// Inputs violate the hypotheses an algorithm relies on.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A search that is guaranteed to succeed did not; indicates a bug.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// A search over finitely many points could not decide the question.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsint
