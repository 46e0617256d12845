#pragma once

#include <stdexcept>
#include <string>

namespace sfvol {

// Invalid parameters handed to a sampler, model step or estimator.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad or insufficient input data (CSV contents, too-short series, zero variances).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An optimizer or recursion failed to produce a usable number.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Run-configuration problems; the message lists every violated precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sfvol
