#pragma once

#include <stdexcept>
#include <string>

namespace walkharm {

// Malformed or inconsistent input: bad group spec, invalid measure, wrong
// element text, violated operation precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical or structural computation did not produce a certified result.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace walkharm
