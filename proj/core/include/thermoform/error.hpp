#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thermoform {

enum class ErrorCode {
  NotIrreducible,
  DeadSymbol,
  BadAlpha,
  UnknownSymbol,
  Inadmissible,
  BadSlope,
  OscViolation,
  ImageEscape,
  NoConvergence,
  NotRegular,
  NonNegativeWeight,
  CapExceeded,
  OnOrLeftOfCriticalLine,
  SingularResolvent,
  WindowTooSmall,
  EmptySeries,
  BadPotential,
  BadQuery,
  Io,
  Config,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace thermoform
