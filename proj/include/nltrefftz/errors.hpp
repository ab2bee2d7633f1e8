#pragma once

#include <stdexcept>
#include <string>

namespace nltrefftz {

/// Requested operation is not defined for this kernel / argument combination.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical failure: singular system, empty Trefftz space, non-finite data.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user configuration (bad keys, out-of-range values).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nltrefftz
