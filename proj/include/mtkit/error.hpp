#pragma once

#include <stdexcept>
#include <string>

namespace mtkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented contract (bad arguments, malformed files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A language code that is not part of the active registry.
class UnknownLanguageError : public InputError {
 public:
  explicit UnknownLanguageError(const std::string& code)
      : InputError("unknown language code '" + code + "'"), code_(code) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A statistic is undefined for the given data (constant input, too few points).
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace mtkit
