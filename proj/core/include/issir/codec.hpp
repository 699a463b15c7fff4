// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <vector>

#include "issir/bitstream.hpp"
#include "issir/codec_config.hpp"
#include "issir/reconstruction.hpp"
#include "issir/signal.hpp"
#include "issir/tf_array.hpp"

namespace issir {

/// Encoder-side analysis that does not depend on T or the band count, kept
/// so the rate-control loop only re-runs quantization and packing.
struct EncoderAnalysis {
  CodecConfig cfg;
  DualGridSpec grid;
  std::vector<RealSpectrogram> power;  // |S_j|^2 on the grid
  ActivityMask activity;               // bin-level, from the true masks
  double duration = 0.0;
};

EncoderAnalysis analyze_sources(const Signal& mix, std::span<const Signal> stems,
                                const CodecConfig& cfg);

/// Quantizes and packs the analysis at one (T, band count) operating point.
SideInfoBundle build_bundle(const EncoderAnalysis& analysis,
                            double threshold_db, int bands_large);

struct EncodeResult {
  SideInfoBundle bundle;
  Bitstream stream;
  double rate = 0.0;  // kb/source/s
  double threshold_db = 0.0;
  int bands_large = 0;
  std::size_t transient_count = 0;
};

/// Most permissive threshold tried by the rate-control loop.
inline constexpr double kPermissiveThresholdDb = -100.0;
/// Band counts visited by rate control, finest first.
inline constexpr int kRateControlBands[] = {250, 125, 75};

/// Searches T in 1 dB steps from kPermissiveThresholdDb up to -20 dB, then
/// the next coarser band count, for the first operating point whose rate is
/// <= 1.1 * target. Throws RateUnreachableError carrying the lowest rate
/// seen when even the coarsest point is too large.
EncodeResult rate_control(const EncoderAnalysis& analysis, double target_rate);
EncodeResult rate_control(const Signal& mix, std::span<const Signal> stems,
                          const CodecConfig& cfg);

/// Transient detection (when cfg.dual), analysis, quantization, packing and,
/// when cfg.target_rate is set, rate control.
EncodeResult encode(const Signal& mix, std::span<const Signal> stems,
                    const CodecConfig& cfg);

std::vector<Signal> decode(const Signal& mix, const Bitstream& stream,
                           const ReconParams& params);

}  // namespace issir
