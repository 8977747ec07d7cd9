#pragma once

#include <stdexcept>
#include <string>

namespace motzkin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Widths, levels or matrix shapes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A configured resource bound (width, term count, matrix size) was exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// The loop parameter is not generic enough for the requested level.
class SingularParameterError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid construction parameters (pair families, generator indices, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An operator does not have the tensor shape an operation requires.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A numerically computed object disagrees with its predicted size.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace motzkin
