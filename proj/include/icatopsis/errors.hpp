#pragma once

#include <stdexcept>
#include <string>

namespace icatopsis {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A decision-matrix column is identically zero, so it cannot be normalized.
class ZeroColumn : public Error {
 public:
  ZeroColumn(std::string criterion)
      : Error("ZeroColumn: criterion '" + criterion + "' has no nonzero entry"),
        criterion_(std::move(criterion)) {}
  const std::string& criterion() const noexcept { return criterion_; }

 private:
  std::string criterion_;
};

class SingularCovariance : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class ZeroDiagonal : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("ParseError (line " + std::to_string(line) + "): " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace icatopsis
