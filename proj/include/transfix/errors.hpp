#pragma once

#include <stdexcept>
#include <string>

namespace transfix {

/// Base for every error raised by the library. `module()` names the
/// subsystem that raised it so front ends can report where things broke.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Malformed textual input (ordinal grammar, scenario JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Exact arithmetic left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A configured size or enumeration bound would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// The caller broke an operation's precondition.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace transfix
