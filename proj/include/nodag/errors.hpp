#pragma once

#include <stdexcept>
#include <string>

namespace nodag {

// Error taxonomy shared across the library. The CLI maps these categories
// onto exit codes, so each what() keeps a stable, greppable prefix.

struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& msg)
      : std::invalid_argument("dimension error: " + msg) {}
};

struct ParameterError : std::invalid_argument {
  explicit ParameterError(const std::string& msg)
      : std::invalid_argument("parameter error: " + msg) {}
};

struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(const std::string& msg)
      : std::runtime_error("singular matrix: " + msg) {}
};

struct DegenerateDataError : std::runtime_error {
  explicit DegenerateDataError(const std::string& msg)
      : std::runtime_error("degenerate data: " + msg) {}
};

struct InsufficientDataError : std::runtime_error {
  explicit InsufficientDataError(const std::string& msg)
      : std::runtime_error("insufficient data: " + msg) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg)
      : std::runtime_error("parse error: " + msg) {}
};

struct FileError : std::runtime_error {
  explicit FileError(const std::string& msg) : std::runtime_error("file error: " + msg) {}
};

}  // namespace nodag
