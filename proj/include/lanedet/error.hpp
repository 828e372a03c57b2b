#pragma once

#include <stdexcept>
#include <string>

namespace lanedet {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file contents (bad PGM header, truncated payload).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Inputs that are well-formed but inconsistent (dimension mismatch, missing ground truth).
class InputError : public Error {
 public:
  using Error::Error;
};

/// File system failures.
class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class DegenerateRegionError : public Error {
 public:
  using Error::Error;
};

class DepthGapError : public Error {
 public:
  using Error::Error;
};

class DegeneratePlaneError : public Error {
 public:
  using Error::Error;
};

}  // namespace lanedet
