#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ide {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  GridMismatch() : Error("fields live on different grids") {}
};

/// A sampled or computed value was NaN/inf.
class NonFiniteValue : public Error {
 public:
  NonFiniteValue(std::size_t index, const std::string& what)
      : Error(what + " (non-finite value at index " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class NegativeState : public Error {
 public:
  explicit NegativeState(std::size_t index)
      : Error("state field is negative at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class MomentDivergence : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

/// One of the standing hypotheses on the growth map is violated.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class EnvelopeViolation : public Error {
 public:
  EnvelopeViolation(double x, double u, const std::string& what)
      : Error(what), x_(x), u_(u) {}
  double x() const { return x_; }
  double u() const { return u_; }

 private:
  double x_;
  double u_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class MonotonicityViolation : public Error {
 public:
  MonotonicityViolation(int iteration, std::size_t index, double increase)
      : Error("monotone orbit increased by " + std::to_string(increase) + " at iteration " +
              std::to_string(iteration) + ", index " + std::to_string(index)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Errors in run configuration; `path()` names the offending field, e.g. `kernel.variance`.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace ide
