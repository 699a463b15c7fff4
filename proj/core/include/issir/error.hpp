// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>
#include <string>

namespace issir {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyInput,
  kDimensionMismatch,
  kDegenerate,
  kSpacingViolation,
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kChecksumMismatch,
  kCorruptPayload,
  kNoSources,
  kRateUnreachable,
  kUnsupportedFormat,
  kIo,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class RateUnreachableError : public Error {
 public:
  RateUnreachableError(double best_rate, const std::string& what)
      : Error(ErrorCode::kRateUnreachable, what), best_rate_(best_rate) {}
  double best_rate() const noexcept { return best_rate_; }

 private:
  double best_rate_;
};

}  // namespace issir
