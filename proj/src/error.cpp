#include "sptri/error.hpp"

namespace sptri {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kSyntax:
      return "SyntaxError";
    case ErrorCode::kMinimalityViolation:
      return "MinimalityViolation";
    case ErrorCode::kNoncrossingViolation:
      return "NoncrossingViolation";
    case ErrorCode::kPunctureOutOfRange:
      return "PunctureOutOfRange";
    case ErrorCode::kNotCollinear:
      return "NotCollinear";
    case ErrorCode::kResourceLimit:
      return "ResourceLimitExceeded";
    case ErrorCode::kInvariantViolation:
      return "InternalInvariantViolation";
    case ErrorCode::kBasisNotVerified:
      return "BasisNotVerified";
    case ErrorCode::kSchemaVersion:
      return "SchemaVersionError";
    case ErrorCode::kOverflow:
      return "Overflow";
    case ErrorCode::kInternal:
      return "InternalError";
  }
  return "Unknown";
}

}  // namespace sptri
