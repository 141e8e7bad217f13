#pragma once

#include <stdexcept>
#include <string>

namespace aitlab {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Model parameters outside the region where the market is viable
/// (Feller / inverse-moment conditions and similar).
class InadmissibleModel : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation produced a non-finite or otherwise unusable number.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A strategy tried to read path data it is not entitled to observe.
class MeasurabilityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace aitlab
