#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace encl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Cholesky pivot fell at or below the positivity threshold.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(std::ptrdiff_t pivot, double value);
  NotPositiveDefinite(const std::string& context, std::ptrdiff_t pivot, double value);

  /// Zero-based index of the failing pivot.
  std::ptrdiff_t pivot() const noexcept { return pivot_; }
  double value() const noexcept { return value_; }

 private:
  std::ptrdiff_t pivot_;
  double value_;
};

/// A matrix that must be positive semidefinite has a clearly negative eigenvalue.
class NegativeEigenvalue : public Error {
 public:
  explicit NegativeEigenvalue(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Deflating ker Q_t left nothing to solve.
class DegenerateShift : public Error {
 public:
  using Error::Error;
};

/// No pencil eigenvalue of the requested sign.
class EmptySide : public Error {
 public:
  using Error::Error;
};

class GapViolation : public Error {
 public:
  explicit GapViolation(std::size_t index);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class MaxIterations : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  explicit UnsupportedOrder(int order);
};

class InsufficientPoints : public Error {
 public:
  using Error::Error;
};

/// Malformed ".forms" input.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid experiment configuration; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace encl
