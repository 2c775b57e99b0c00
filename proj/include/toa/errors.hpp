#pragma once

#include <stdexcept>
#include <string>

namespace toa {

/// Invalid or inconsistent configuration input. CLI exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical validity violated at run time (boundary leakage, step-size
/// guards, unconverged observables). CLI exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure while writing results. CLI exit code 4.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace toa
