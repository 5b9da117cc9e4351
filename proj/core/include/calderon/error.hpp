#pragma once

#include <stdexcept>
#include <string>

namespace calderon {

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that violates a documented precondition (shape, bounds, ellipticity).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A solver ran but could not deliver the requested accuracy.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// File and format problems.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace calderon
