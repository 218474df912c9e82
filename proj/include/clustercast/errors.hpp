#pragma once

#include <stdexcept>
#include <string>

namespace clustercast {

/// Invalid input to an operation (non-positive radius, a > r, ...).
class ParameterError : public std::invalid_argument {
public:
  ParameterError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Quadrature did not converge, or a formula diverges for the given inputs.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A computed object violates an invariant it must hold (normalization,
/// arcsin argument far outside [-1, 1], ...).
class IntegrityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration text or command-line problem. `field` names the offending key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

} // namespace clustercast
