#pragma once

#include <stdexcept>
#include <string>

namespace smspace {

/// Input lies outside the admissible range of a sensor or actuator.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Inconsistent configuration or mismatched inputs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Threshold calibration could not produce a usable value.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smspace
