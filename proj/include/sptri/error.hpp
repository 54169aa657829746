#ifndef SPTRI_ERROR_HPP
#define SPTRI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sptri {

/// Error categories raised by the core library. The numeric values are the
/// status codes surfaced through the C API (see sptri.h).
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kSyntax = 2,
  kMinimalityViolation = 3,
  kNoncrossingViolation = 4,
  kPunctureOutOfRange = 5,
  kNotCollinear = 6,
  kResourceLimit = 7,
  kInvariantViolation = 8,
  kBasisNotVerified = 9,
  kSchemaVersion = 10,
  kOverflow = 11,
  kInternal = 12,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sptri

#endif  // SPTRI_ERROR_HPP
