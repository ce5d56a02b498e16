#pragma once

#include <stdexcept>

namespace timerev {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A position or parameter lies outside the region where an operation is defined.
struct DomainError : Error {
  using Error::Error;
};

// Two operands live on different grids, wavelengths or dimensionalities.
struct IncompatibleError : Error {
  using Error::Error;
};

// An element, train or experiment description is malformed.
struct ConfigError : Error {
  using Error::Error;
};

// The grid is too coarse for the requested operation (aliasing, unresolved fringes).
struct SamplingError : Error {
  using Error::Error;
};

// Quadrature did not converge or produced non-finite values.
struct NumericalError : Error {
  using Error::Error;
};

// A curve does not have the shape an estimator requires.
struct ShapeError : Error {
  using Error::Error;
};

// The operation has no representation for this element.
struct UnsupportedError : Error {
  using Error::Error;
};

}  // namespace timerev
