#pragma once

#include <stdexcept>
#include <string>

namespace pgl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or an inadmissible configuration (exponents, sizes, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A stated invariant of a run was violated (CFL, conservation, bounds).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The computation produced unusable numbers (rho <= 0, NaN, Inf).
class NumericalAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace pgl
