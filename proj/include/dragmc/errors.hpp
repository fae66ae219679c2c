#pragma once

#include <stdexcept>
#include <string>

namespace dragmc {

/// Invalid configuration: wrong dimensions, non-positive proposal widths,
/// bad CLI field values. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A caller passed a value outside an operation's domain.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input is well-formed but statistically degenerate (zero variance,
/// zero proposals).
class DegenerateInputError : public std::domain_error {
 public:
  explicit DegenerateInputError(const std::string& what) : std::domain_error(what) {}
};

/// The energy model produced something impossible, e.g. a NaN log ratio.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dragmc
