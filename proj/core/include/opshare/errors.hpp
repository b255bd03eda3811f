#pragma once

#include <stdexcept>
#include <string>

namespace opshare {

/// Raised when a NetworkConfig or ExperimentSpec violates one of its invariants.
/// The message names the violated field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The closed-form rate engine only covers alpha = 4 with unit-rate Rayleigh fading.
class UnsupportedModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matching operation would break supply (C1) or demand (C2) bookkeeping.
class ConstraintError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace opshare
