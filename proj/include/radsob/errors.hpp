#pragma once

#include <stdexcept>
#include <string>

namespace radsob {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Jets combined with mismatched variable counts or base points.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Partial derivative requested from an order-0 jet.
class OrderExhaustedError : public Error {
 public:
  using Error::Error;
};

/// Composition with a function that is singular at the jet's constant term.
class SingularCompositionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the domain of a function or manifold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An angular coordinate sits on a pole of the nested-sine chart.
class ChartSingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Evaluation closer to the origin than the geometry engine supports.
class ProximityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A diagonal metric entry vanished.
class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// An integrand returned NaN.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or invalid parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the hypotheses of the result being checked.
class InadmissibleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace radsob
