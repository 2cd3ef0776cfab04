#pragma once

#include <stdexcept>
#include <string>

namespace nlsfem {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// A pivot dropped below the singularity threshold during banded LU.
struct SingularMatrix : Error {
  using Error::Error;
};

/// The nonlinearity weight or forcing evaluated to a non-finite value at a
/// quadrature point.
struct NonFiniteWeight : Error {
  using Error::Error;
};

/// An operation needed an analytic derivative the ScalarField does not carry.
struct MissingDerivative : Error {
  using Error::Error;
};

struct UnknownCase : Error {
  using Error::Error;
};

}  // namespace nlsfem
