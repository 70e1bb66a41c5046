#pragma once

#include <stdexcept>
#include <string>

namespace translators {

/// Violated precondition on caller-supplied data.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integration, quadrature or iteration did not meet its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First fundamental form (or the normal) is degenerate at the sample.
class DegeneracyError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Evaluation on the rotation axis r <= 0 of a phase-plane system.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace translators
