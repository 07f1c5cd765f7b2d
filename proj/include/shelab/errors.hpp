#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shelab {

/// Argument outside the mathematical domain of an operation (t <= 0, beta <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested value lies outside the range of a monotone function being inverted.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// An integral that would be infinite (e.g. Upsilon for alpha <= 1).
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Periodic grid too narrow for the requested kernel.
class GridTooSmallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent experiment or model configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simulated field produced a non-finite value.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, std::size_t time_index)
      : std::runtime_error(what), time_index_(time_index) {}

  std::size_t time_index() const noexcept { return time_index_; }

 private:
  std::size_t time_index_;
};

}  // namespace shelab
