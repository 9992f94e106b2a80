#pragma once

#include <stdexcept>
#include <string>

namespace hegp {

/// Invalid configuration or parameters, detected before any work starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A schedule that cannot be interpreted against its scenario (e.g. unknown request id).
class MalformedScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A schedule was produced or loaded that violates at least one constraint.
class InfeasibleScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read, parsed or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hegp
