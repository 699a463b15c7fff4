// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "issir/codec_config.hpp"

namespace issir {

/// Lossless general-purpose compression stage. kDeflate is zlib at maximum
/// compression; kStore passes bytes through.
std::vector<std::uint8_t> entropy_encode(std::span<const std::uint8_t> bytes,
                                         EntropyBackend backend =
                                             EntropyBackend::kDeflate);
/// `expected_size` is the raw size recorded alongside the payload.
std::vector<std::uint8_t> entropy_decode(std::span<const std::uint8_t> bytes,
                                         std::size_t expected_size,
                                         EntropyBackend backend =
                                             EntropyBackend::kDeflate);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace issir
