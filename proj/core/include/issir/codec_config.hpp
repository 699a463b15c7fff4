// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <limits>
#include <optional>

namespace issir {

enum class EntropyBackend : std::uint8_t {
  kStore = 0,
  kDeflate = 1,
};

/// Encoder parameters. dB quantities travel as signed centi-dB integers, so
/// the coder works with the centi-dB rounded values throughout.
struct CodecConfig {
  double step_db = 1.0;         // quantization step u
  double threshold_db = -60.0;  // discard bands below this level (<= -20)
  double rho = 0.01;            // activity threshold
  int bands_large = 250;
  int bands_small = 25;
  int large_window = 2048;
  int small_window = 256;
  int overlap_divisor = 2;      // 2: 50% overlap, 4: 75%
  bool dual = false;
  std::optional<double> target_rate;  // kb/source/s
  EntropyBackend backend = EntropyBackend::kDeflate;

  void validate() const;

  std::int32_t step_cdb() const;
  std::int32_t threshold_cdb() const;
  std::uint32_t rho_ppm() const;
};

/// Sentinel for -infinity in centi-dB fields (silent source, no threshold).
inline constexpr std::int32_t kMinusInfCdb =
    std::numeric_limits<std::int32_t>::min();

std::int32_t to_cdb(double db);
double from_cdb(std::int32_t cdb);

}  // namespace issir
