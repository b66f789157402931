#pragma once

#include <stdexcept>
#include <string>

namespace editbench {

// Error categories map onto the CLI exit codes: usage -> 1,
// backend/parse/io -> 2, validation -> 3.
enum class ErrorKind {
  validation,
  usage,
  backend,
  parse,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error validation_error(std::string message) {
  return Error(ErrorKind::validation, std::move(message));
}
inline Error usage_error(std::string message) {
  return Error(ErrorKind::usage, std::move(message));
}
inline Error backend_error(std::string message) {
  return Error(ErrorKind::backend, std::move(message));
}
inline Error parse_error(std::string message) {
  return Error(ErrorKind::parse, std::move(message));
}
inline Error io_error(std::string message) {
  return Error(ErrorKind::io, std::move(message));
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage:
      return 1;
    case ErrorKind::backend:
    case ErrorKind::parse:
    case ErrorKind::io:
      return 2;
    case ErrorKind::validation:
      return 3;
  }
  return 2;
}

}  // namespace editbench
