#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace nctorus {

// Shape, dimension or deformation-matrix mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called on a connection of the wrong convention.
class ConventionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A strict-mode result would need support outside the truncation box.
class TruncationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iteration failed to converge or a residual contract was violated.
// Carries the last residual so callers can report it.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Residual formatted for error messages, e.g. "3.300e-09".
inline std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

// Malformed or schema-violating input (JSON documents, CLI configs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nctorus
