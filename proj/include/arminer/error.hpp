#pragma once

#include <stdexcept>
#include <string>

namespace arminer {

// Failure categories. The CLI maps io/data to exit code 1 and
// invalid_argument to exit code 2.
enum class ErrorKind {
  io,
  data,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace arminer
