#pragma once

#include <stdexcept>
#include <string>

namespace ardtk {

enum class ErrorKind {
  Usage,
  Domain,
  Range,
  SizeGuard,
  MalformedCodeword,
  RetryExhausted,
  AdversaryOverflow,
  Membership,
  DegenerateCurve,
  NonConvergence,
  MissingGridPoint,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace ardtk
