#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gllab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A domain type's invariant was violated (singular matrix, weights not
/// summing to one, invalid b_n sequence, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t iterations)
      : Error(what), iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// A result would leave the representable or tabulated range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The requested feature is not available for this configuration.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace gllab
