#pragma once

#include <stdexcept>
#include <string>

namespace recur {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (config, literal, parameters).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"
                       : what),
        message_(what),
        line_(line),
        column_(column) {}

  /// The message without the position suffix.
  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// A window with horizon 0 where a positive horizon is required.
class DegenerateWindow : public Error {
 public:
  using Error::Error;
};

/// A vector was handed to an operator or seminorm of a different space.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// A seminorm cannot be evaluated with a certified bound.
class SeminormRefusal : public Error {
 public:
  using Error::Error;
};

/// Floating-point arithmetic left the representable range; rerun exactly.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine did not converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace recur
