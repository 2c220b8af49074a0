#pragma once

#include <stdexcept>
#include <string>

namespace subdiff {

// Base of the engine's exception hierarchy.  Everything thrown on purpose
// derives from Error; anything else escaping the library is a bug.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A numeric argument lies outside its mathematical domain
// (e.g. alpha outside (0,1], a non-positive spot price).
class DomainError : public Error {
public:
  using Error::Error;
};

// Inconsistent or unusable configuration: mismatched barrier/grid bounds,
// unsupported contract routed to the wrong solver, malformed config files.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Numerical failure inside a solver (zero pivot in the tridiagonal sweep).
class SolverError : public Error {
public:
  using Error::Error;
};

// Least-squares regression cannot be carried out: fewer samples than basis
// functions, or a rank-deficient design matrix.
class RegressionError : public Error {
public:
  using Error::Error;
};

// A knock-out price exceeds its vanilla counterpart by more than the
// configured tolerance; signals solver inconsistency rather than user error.
class ParityViolation : public Error {
public:
  using Error::Error;
};

// File output failure (unwritable path, refusing to write an empty report).
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace subdiff
