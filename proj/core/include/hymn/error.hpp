#pragma once

#include <stdexcept>
#include <string>

namespace hymn {

/// Raised for invalid inputs and failed preconditions anywhere in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical computation left the representable range.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hymn
