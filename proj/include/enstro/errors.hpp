#pragma once

#include <stdexcept>
#include <string>

namespace enstro {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or an inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Arrays whose sizes or grids do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Angular resolution too coarse for the requested band limit.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Map evaluated outside its domain of definition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Singular solves, non-finite values, violated solvability conditions.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Time step too large for the reconstructed velocity.
class CflError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace enstro
