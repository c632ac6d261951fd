#pragma once

#include <stdexcept>
#include <string>

namespace sigmadamp {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (e.g. negative s).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Equation parameters violate a dimension/regularity window.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

// Inconsistent exponents or options passed to a check.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Field sizes that do not match the grid.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Bad sample data: nonpositive values where a logarithm is needed, NaNs.
class DataError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

// A trajectory does not cover the space-time region a functional needs.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// Value outside the range of an invertible map.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sigmadamp
