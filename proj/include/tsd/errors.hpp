#pragma once

#include <stdexcept>
#include <string>

namespace tsd {

/// Raised when an iterative numerical method misses its tolerance.
/// Carries the error estimate that was actually reached.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Raised when a quantity that is defined by an integral does not exist.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace tsd
