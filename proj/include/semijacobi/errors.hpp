#ifndef SEMIJACOBI_ERRORS_HPP
#define SEMIJACOBI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace semijacobi {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value could not be certified at the requested number of digits.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moment-matrix factorization failed even at the largest allowed precision.
class ConditioningError : public PrecisionError {
 public:
  ConditioningError(const std::string& what, int n) : PrecisionError(what), n_(n) {}
  /// Index of the offending pivot.
  int n() const noexcept { return n_; }

 private:
  int n_;
};

/// Division by a vanishing quantity (pole of a formula, degenerate step).
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semijacobi

#endif  // SEMIJACOBI_ERRORS_HPP
