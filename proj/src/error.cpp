#include "dip/error.hpp"

namespace dip {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegeneratePose: return "DegeneratePose";
    case ErrorCode::kDegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kTruncatedData: return "TruncatedData";
    case ErrorCode::kUnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::kAlreadyGray: return "AlreadyGray";
    case ErrorCode::kEmptyWindow: return "EmptyWindow";
    case ErrorCode::kTargetLost: return "TargetLost";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kJoinMismatch: return "JoinMismatch";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace dip
