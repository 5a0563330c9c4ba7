#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opmean {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative kernel (eigensolver, quadrature ladder) failed to converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A scalar function was asked for a value outside its domain or produced a non-finite value.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be positive (semi)definite was not.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Construction of the companion mean requires a non-linear representing function.
class LinearMean : public Error {
 public:
  using Error::Error;
};

/// Input outside the hypotheses of a check, e.g. spectra leaving (0, 1/2].
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// Bad user-facing argument (out-of-range weight, malformed file, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Parse failure in a textual input, with the offending character offset.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InvalidArgument(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace opmean
