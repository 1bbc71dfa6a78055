#pragma once

#include <stdexcept>
#include <string>

namespace dopt {

// bad or inconsistent configuration; maps to process exit code 1
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// non-finite state, scaling underflow and similar; maps to exit code 2
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dopt
