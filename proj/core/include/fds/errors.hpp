#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fds {

// Invalid user input: bad flags, malformed files, inconsistent shapes.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ShapeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Argument outside the mathematical domain of an operation (e.g. t outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The divergence/discrepancy identity is only stated where alpha_t != 0.
class TheoremDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Failures that arise while computing: singular coefficients, non-finite
// states, diverging training.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RefinementError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TrainingError : public NumericalError {
 public:
  TrainingError(const std::string& what, std::size_t step)
      : NumericalError(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace fds
