#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regen {

enum class ErrorCode {
  InvalidDegree,
  InvalidCostOrder,
  InvalidRatio,
  NonPositive,
  DegenerateConfiguration,
  IndexOutOfRange,
  InsufficientRepairBandwidth,
  NotApplicable,
  InvalidArgument,
  InvalidConstruction,
  InsufficientHelpers,
  NonIntegerDownload,
  UnknownNode,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::InvalidCostOrder: return "InvalidCostOrder";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InsufficientRepairBandwidth: return "InsufficientRepairBandwidth";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConstruction: return "InvalidConstruction";
    case ErrorCode::InsufficientHelpers: return "InsufficientHelpers";
    case ErrorCode::NonIntegerDownload: return "NonIntegerDownload";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// Every failure in the library is reported as an Error carrying a stable code;
// the CLI prints the code verbatim so scripts can match on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace regen
