#pragma once

#include <stdexcept>
#include <string>

namespace madasub {

// Exit codes of the command line tool map onto these three families.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// X_S^T X_S is numerically singular.
class SingularFitError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Logistic coefficients diverged (complete or quasi-complete separation).
class SeparationError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace madasub
