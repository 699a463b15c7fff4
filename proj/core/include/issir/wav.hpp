// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <string>

#include "issir/signal.hpp"

namespace issir {

enum class WavFormat { kPcm16, kFloat32 };

/// Reads a mono RIFF/WAVE file (PCM 16/24/32-bit or IEEE float 32/64-bit,
/// including WAVE_FORMAT_EXTENSIBLE). Integer samples are scaled to [-1, 1).
Signal read_wav(const std::string& path);

/// Writes a mono file. Returns the number of samples clipped to [-1, 1]
/// (always 0 for float output).
std::size_t write_wav(const std::string& path, const Signal& signal,
                      WavFormat format = WavFormat::kPcm16);

}  // namespace issir
