#pragma once

#include <stdexcept>
#include <string>

namespace prolate {

// Bad input: out-of-domain parameters, malformed configuration.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not produce a trustworthy result.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The spectral cutoff set is empty for the requested threshold.
class EmptyCutoffError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace prolate
