// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/error.hpp"

namespace issir {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kEmptyInput: return "empty input";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kDegenerate: return "degenerate input";
    case ErrorCode::kSpacingViolation: return "spacing violation";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kUnsupportedVersion: return "unsupported version";
    case ErrorCode::kTruncated: return "truncated stream";
    case ErrorCode::kChecksumMismatch: return "checksum mismatch";
    case ErrorCode::kCorruptPayload: return "corrupt payload";
    case ErrorCode::kNoSources: return "no sources";
    case ErrorCode::kRateUnreachable: return "rate unreachable";
    case ErrorCode::kUnsupportedFormat: return "unsupported format";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown";
}

}  // namespace issir
