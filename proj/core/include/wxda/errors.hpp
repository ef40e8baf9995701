#pragma once

#include <stdexcept>
#include <string>

namespace wxda {

// Root of the library's exception hierarchy. The CLI maps DataError and its
// descendants to exit code 1 and ContractViolation/DivergenceError to exit 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Problems with input data: malformed files, out-of-range records,
// insufficient samples. Recoverable by fixing the inputs.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class InvalidGridError : public DataError {
 public:
  using DataError::DataError;
};

class LayoutError : public DataError {
 public:
  using DataError::DataError;
};

class WindowError : public DataError {
 public:
  using DataError::DataError;
};

class StatsError : public DataError {
 public:
  using DataError::DataError;
};

class DomainError : public DataError {
 public:
  using DataError::DataError;
};

class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

class NoDataError : public DataError {
 public:
  using DataError::DataError;
};

// A pluggable operator broke its contract (wrong grid, wrong valid time).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// An operator produced non-finite output; message carries the step index.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace wxda
