// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <vector>

#include "issir/codec_config.hpp"
#include "issir/grid.hpp"
#include "issir/quantizer.hpp"

namespace issir {

struct SourceSideInfo {
  QuantizedSpectrogram spectrogram;
  std::vector<std::uint8_t> activity_large;  // frames x bands_large bits
  std::vector<std::uint8_t> activity_small;  // small frames x bands_small bits
  bool operator==(const SourceSideInfo&) const = default;
};

/// Everything the decoder needs besides the mixture.
struct SideInfoBundle {
  std::uint32_t sample_rate = 44100;
  std::uint64_t signal_length = 0;
  int large_window = 2048;
  int small_window = 256;
  int overlap_divisor = 2;
  std::int32_t step_cdb = 100;
  std::uint32_t rho_ppm = 10000;
  int bands_large = 250;
  int bands_small = 25;
  std::int32_t threshold_cdb = -2000;
  EntropyBackend backend = EntropyBackend::kDeflate;
  std::vector<int> transients;
  std::vector<SourceSideInfo> sources;

  int num_sources() const { return static_cast<int>(sources.size()); }
  DualGridSpec grid() const;
  /// Codec parameters echoed by the header (no target rate).
  CodecConfig config() const;
  /// Structural checks: dimensions agree with the grid, bits are 0/1.
  void validate() const;
  bool operator==(const SideInfoBundle&) const = default;
};

using Bitstream = std::vector<std::uint8_t>;

inline constexpr std::uint16_t kFormatVersion = 1;

/// Layout (little-endian):
///   "ISSR" | u16 version | u32 header_len | header | u32 header_crc
///   | coded payload | u32 payload_crc
/// The header carries the scalar fields, transient list, per-source norms in
/// centi-dB and the raw/coded payload sizes. The payload holds, per source
/// and resolution, delta-coded (index, activity) symbols as zigzag varints,
/// compressed by the entropy backend named in the header.
Bitstream serialize(const SideInfoBundle& bundle);
SideInfoBundle deserialize(const Bitstream& stream);

/// kb per source per second.
double measure_rate(std::size_t stream_bytes, double duration_s, int sources);
inline double measure_rate(const Bitstream& stream, double duration_s,
                           int sources) {
  return measure_rate(stream.size(), duration_s, sources);
}

}  // namespace issir
