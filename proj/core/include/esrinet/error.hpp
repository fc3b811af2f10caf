#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esrinet {

enum class ErrorCode {
  kMissingFile,
  kSchemaError,
  kDanglingEdge,
  kDuplicateFirmId,
  kNonPositiveWeight,
  kSelfLoop,
  kUnknownSector,
  kInvalidScenario,
  kNoEmploymentData,
  kMissingTotal,
  kTargetUnreachable,
  kInsufficientPoints,
  kInfeasibleParams,
  kMissingUpstream,
  kInvalidArgument,
  kIoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every data-level failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace esrinet
