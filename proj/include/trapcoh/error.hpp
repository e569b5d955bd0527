#ifndef TRAPCOH_ERROR_HPP_
#define TRAPCOH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace trapcoh {

// Invalid user input: configuration, arguments outside an operation's domain.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A spectrum was queried outside the region where it is defined.
class SpectrumRangeError : public ConfigError {
 public:
  SpectrumRangeError(const std::string& what, double omega)
      : ConfigError(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

// Iterative solver failed to converge or the problem is numerically degenerate.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fit data does not show the two-lobed structure of a hollow beam.
class InsufficientStructure : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trapcoh

#endif  // TRAPCOH_ERROR_HPP_
