#pragma once

#include <stdexcept>
#include <string>

namespace polyparse {

// Bad input data: malformed files, inconsistent treebanks, unknown labels.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation was violated by the caller.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Internal invariant broken; indicates a bug rather than bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace polyparse
