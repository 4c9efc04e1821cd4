#pragma once

#include <stdexcept>
#include <string>

namespace glimm {

enum class ErrorKind {
  NotStrictlyHyperbolic,
  OutOfDomain,
  AmbiguousClassification,
  Delta0TooLarge,
  DegenerateGrid,
  NoConvergence,
  DomainEscape,
  DataTooLarge,
  EmptyRange,
  TVBudgetExceeded,
  CFLViolation,
  WindowTooSmall,
  EmptyInterval,
  RhoTooSmall,
  InvalidArgument,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace glimm
