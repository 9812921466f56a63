#pragma once

#include <stdexcept>
#include <string>

namespace qrgg {

enum class ErrorCode {
  kInvalidParameter,
  kUnsupportedKernel,
  kUnknownNode,
  kSizeGuard,
  kRateExceedsCapacity,
  kMalformedInput,
  kIo,
};

const char* to_string(ErrorCode code);

/// Base error for every failure raised by the library. The code lets callers
/// (the CLI in particular) map failures onto exit statuses without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qrgg
