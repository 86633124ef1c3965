#pragma once

#include <stdexcept>
#include <string>

namespace projsplit {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Matrix dimensions do not match the operation contract.
class InvalidShapeError : public Error {
 public:
  using Error::Error;
};

// Requested rank is outside [1, min(rows, cols)].
class InvalidRankError : public Error {
 public:
  using Error::Error;
};

// An input violates a documented precondition (non-finite entries,
// non-orthonormal columns, invalid parameter range, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A convergence certificate was requested but its hypothesis fails.
class NoCertificateError : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the mathematical domain of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace projsplit
