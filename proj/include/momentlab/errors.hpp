#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Usage or configuration problems (bad flags, malformed input files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ModelFormatError : public ConfigError {
 public:
  ModelFormatError(const std::string& message, std::size_t line)
      : ConfigError(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Base for failures of the numerics themselves; the CLI maps these to exit 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class UnavailableCoefficient : public NumericError {
 public:
  explicit UnavailableCoefficient(std::size_t index)
      : NumericError("coefficient a_n, b_n unavailable at n = " + std::to_string(index)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Raised when an l2 sequence does not settle within the hard cap. Carries the
/// partial sums of squares so callers can see how far it got.
class IndeterminacySuspect : public NumericError {
 public:
  IndeterminacySuspect(const std::string& message, std::vector<double> partial_norms)
      : NumericError(message), partial_norms_(std::move(partial_norms)) {}
  const std::vector<double>& partial_norms() const { return partial_norms_; }

 private:
  std::vector<double> partial_norms_;
};

class DegenerateZero : public NumericError {
 public:
  using NumericError::NumericError;
};

class ScanDensityExceeded : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class InsufficientMass : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConditioningError : public NumericError {
 public:
  ConditioningError(const std::string& message, std::size_t m)
      : NumericError(message), m_(m) {}
  std::size_t m() const { return m_; }

 private:
  std::size_t m_;
};

}  // namespace momentlab
