#pragma once

#include <stdexcept>
#include <string>

namespace flatpoly {

enum class ErrorCode {
  invalid_argument,
  not_prime,
  budget_exceeded,
  precondition,
  not_perfect_difference,
  negative_spacer,
  numeric_failure,
  parse_error,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the core carries one of the codes above; the C API
// maps them one-to-one onto fp_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::not_prime: return "not_prime";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::not_perfect_difference: return "not_perfect_difference";
    case ErrorCode::negative_spacer: return "negative_spacer";
    case ErrorCode::numeric_failure: return "numeric_failure";
    case ErrorCode::parse_error: return "parse_error";
  }
  return "unknown";
}

}  // namespace flatpoly
