// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/entropy.hpp"

#include <zlib.h>

#include "issir/error.hpp"

namespace issir {

std::vector<std::uint8_t> entropy_encode(std::span<const std::uint8_t> bytes,
                                         EntropyBackend backend) {
  if (bytes.empty()) return {};
  switch (backend) {
    case EntropyBackend::kStore:
      return {bytes.begin(), bytes.end()};
    case EntropyBackend::kDeflate: {
      uLongf size = compressBound(static_cast<uLong>(bytes.size()));
      std::vector<std::uint8_t> out(size);
      const int rc = compress2(out.data(), &size, bytes.data(),
                               static_cast<uLong>(bytes.size()),
                               Z_BEST_COMPRESSION);
      if (rc != Z_OK) {
        throw Error(ErrorCode::kInvalidArgument, "deflate failed");
      }
      out.resize(size);
      return out;
    }
  }
  throw Error(ErrorCode::kUnsupportedFormat, "unknown entropy backend");
}

std::vector<std::uint8_t> entropy_decode(std::span<const std::uint8_t> bytes,
                                         std::size_t expected_size,
                                         EntropyBackend backend) {
  if (bytes.empty()) {
    if (expected_size != 0) {
      throw Error(ErrorCode::kCorruptPayload, "empty payload, data expected");
    }
    return {};
  }
  switch (backend) {
    case EntropyBackend::kStore:
      if (bytes.size() != expected_size) {
        throw Error(ErrorCode::kCorruptPayload, "stored payload size mismatch");
      }
      return {bytes.begin(), bytes.end()};
    case EntropyBackend::kDeflate: {
      std::vector<std::uint8_t> out(expected_size);
      uLongf size = static_cast<uLongf>(expected_size);
      const int rc = uncompress(out.data(), &size, bytes.data(),
                                static_cast<uLong>(bytes.size()));
      if (rc != Z_OK || size != expected_size) {
        throw Error(ErrorCode::kCorruptPayload, "inflate failed");
      }
      return out;
    }
  }
  throw Error(ErrorCode::kUnsupportedFormat, "unknown entropy backend");
}

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(::crc32(0L, Z_NULL, 0), bytes.data(),
              static_cast<uInt>(bytes.size())));
}

}  // namespace issir
