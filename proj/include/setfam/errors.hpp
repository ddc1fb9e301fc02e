#pragma once

#include <stdexcept>
#include <string>

namespace setfam {

/// Malformed arguments: out-of-range elements, bad parameters, parse failures.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold for the given input.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A capacity or budget limit was hit; the answer is unknown, not wrong.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace setfam
