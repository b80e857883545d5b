#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subplanck {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two objects that must share a grid (or a shape) do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A wave packet does not fit on the grid with the required vacuum margin.
class SupportError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Time integration produced non-finite values.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated binary file.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace subplanck
