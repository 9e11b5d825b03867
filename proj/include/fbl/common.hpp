#pragma once

#include <stdexcept>
#include <string>

namespace fbl {

// Bad user input: malformed parameters, dimension mismatches, invalid ranges.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Breakdown inside a numerical routine: non-finite values, solver failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fbl
