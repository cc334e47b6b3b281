#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace gkdv {

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace detail

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration or files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the numerical domain of an operation was violated
/// (out-of-range query, negative dissipative time, off-constraint input).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation produced a non-finite value.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A sampled field carries spectral content above the resolution threshold.
class UnresolvedFieldError : public Error {
 public:
  UnresolvedFieldError(const std::string& what, double tail)
      : Error("unresolved field: " + what), tail_(tail) {}
  double tail() const noexcept { return tail_; }

 private:
  double tail_;
};

/// Time integration blew up or leaked into the periodic boundary strip.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Iteration failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace gkdv
