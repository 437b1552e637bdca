#pragma once

#include <stdexcept>
#include <string>

namespace lqm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations: bad bounds, zero norms, malformed parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two operands live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// A stored amplitude or computed scalar became NaN/Inf.
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

// Broken internal assumption (e.g. Hermiticity violated beyond tolerance).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lqm
