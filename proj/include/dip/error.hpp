#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dip {

enum class ErrorCode {
  kInvalidArgument,
  kDegeneratePose,
  kDegenerateTriangle,
  kEmptyRegion,
  kEmptyInput,
  kMalformedHeader,
  kTruncatedData,
  kUnsupportedMaxval,
  kAlreadyGray,
  kEmptyWindow,
  kTargetLost,
  kParseError,
  kJoinMismatch,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI exit-code mapping) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dip
