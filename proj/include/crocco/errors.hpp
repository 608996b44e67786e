#pragma once

#include <stdexcept>
#include <string>

namespace crocco {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a structural requirement (non-positive U, bad table).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Configuration problems: bad keys, grid too coarse, CFL violated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An argument outside the admissible range of an operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Newton failures, failed inversions, non-finite quadratures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace crocco
