#pragma once

#include <stdexcept>
#include <string>

namespace qitc {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct MissingFidelity : std::logic_error {
  using std::logic_error::logic_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line_number)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + msg),
        line(line_number) {}
  int line;
};

struct InconsistentLength : ParseError {
  using ParseError::ParseError;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qitc
