// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "issir/codec_config.hpp"
#include "issir/tf_array.hpp"

namespace issir {

inline constexpr std::int32_t kSilentIndex =
    std::numeric_limits<std::int32_t>::min();

/// Log-quantized band energies of one resolution of one source.
struct QuantizedBands {
  int rows = 0;
  int bands = 0;
  std::vector<std::int32_t> indices;  // rows x bands, kSilentIndex if dropped
  std::int32_t norm_cdb = kMinusInfCdb;

  std::int32_t at(int row, int band) const {
    return indices[static_cast<std::size_t>(row) * bands + band];
  }
  bool operator==(const QuantizedBands&) const = default;
};

/// Mean energy per band, per row.
TfMatrix<double> band_energies(const TfMatrix<double>& power,
                               std::span<const int> edges);

/// Pools `power` into bands, normalizes to the loudest band (norm rounded to
/// centi-dB), drops bands below `threshold_cdb` and rounds the rest to
/// multiples of the step, half away from zero.
QuantizedBands quantize_bands(const TfMatrix<double>& power,
                              std::span<const int> edges,
                              std::int32_t step_cdb,
                              std::int32_t threshold_cdb);

/// Inverse of quantize_bands: every bin of a band receives the band's
/// dequantized mean energy; silent bands are zero.
TfMatrix<double> dequantize_bands(const QuantizedBands& q,
                                  std::span<const int> edges,
                                  std::int32_t step_cdb);

/// Both resolutions of one source.
struct QuantizedSpectrogram {
  QuantizedBands large;
  QuantizedBands small;
  bool operator==(const QuantizedSpectrogram&) const = default;
};

QuantizedSpectrogram quantize_spectrogram(const RealSpectrogram& power,
                                          const CodecConfig& cfg);
RealSpectrogram dequantize_spectrogram(const QuantizedSpectrogram& q,
                                       const CodecConfig& cfg,
                                       const DualGridSpec& grid);

/// Per-bin log quantization with step `step_db` and no threshold; a step of
/// zero returns the input. Models quantized side information without banding.
RealSpectrogram requantize(const RealSpectrogram& power, double step_db);

/// Band activity bits (rows x bands, 0/1): a band is active when any of its
/// bins is.
std::vector<std::uint8_t> encode_activity(const TfMatrix<double>& psi,
                                          std::span<const int> edges);
/// Expands band bits back to a bin mask (a superset of the encoded mask).
TfMatrix<double> decode_activity(std::span<const std::uint8_t> bits, int rows,
                                 std::span<const int> edges);

}  // namespace issir
