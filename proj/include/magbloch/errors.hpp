#pragma once

#include <stdexcept>
#include <string>

namespace magbloch {

/// Failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
  parse,            // malformed model file or command line
  invariant,        // input violates a structural precondition
  not_quantizable,  // flux fails the integrality test
  numeric,          // overflow, non-Hermitian input, failed solve, size limits
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace magbloch
