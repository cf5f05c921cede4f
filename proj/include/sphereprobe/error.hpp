#pragma once

#include <stdexcept>
#include <string>

namespace sphereprobe {

enum class ErrorCode {
  InvalidArgument,
  MismatchedSurface,
  Parity,
  TriangleInequality,
  Disconnected,
  Peripheral,
  Empty,
  NotPants,
  Precondition,
  NotFoundUnderCap,
  ResourceCap,
  WindowExhausted,
  AuditFailure,
  Io,
};

const char* to_string(ErrorCode code);

// Every failure raised by the engine carries a code so that callers (and the
// CLI exit-code policy) can tell cap exhaustion apart from contradictions.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  bool is_cap_exhaustion() const noexcept {
    return code_ == ErrorCode::NotFoundUnderCap || code_ == ErrorCode::ResourceCap ||
           code_ == ErrorCode::WindowExhausted;
  }

 private:
  ErrorCode code_;
};

}  // namespace sphereprobe
