#pragma once

#include <stdexcept>
#include <string>

namespace qpm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed matrices, specs or configuration fields.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A dense eigensolver or factorization did not succeed.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpm
