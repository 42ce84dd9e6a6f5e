#pragma once

#include <stdexcept>
#include <string>

namespace tfalg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different phase-space dimensions.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(int expected, int got)
      : Error("dimension mismatch: expected d=" + std::to_string(expected) +
              ", got d=" + std::to_string(got)) {}
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The operator is (numerically) not invertible on the oracle grid.
class SingularOperator : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Grid too small, misaligned shift, lattice not commensurate with the grid.
class GridError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Support growth or matrix size exceeded a configured cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or flag value.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tfalg
