#pragma once

#include <stdexcept>
#include <string>

namespace msca {

// No allocation/path repair can satisfy the constraints of the instance.
class InfeasibleInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An outer or inner iteration budget was exhausted before convergence.
class IterationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inner solver broke down (line search collapse, factorization failure).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace msca
