#pragma once

#include <stdexcept>
#include <string>

namespace gradshop {

/// Shapes of two inputs disagree, or a grid is too small for an operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but outside the domain of the operation
/// (non-finite values, zero signal for an SNR, rank-deficient lighting).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad configuration value or unparseable configuration document.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gradshop
